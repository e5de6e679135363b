//! Braidings on graded components, multi-strand composites and the axiom checkers.
//!
//! A matrix component for grades (v, w) stores `F[(i, j)][(m, n)]` with
//! `Ψ(e_i ⊗ f_j) = Σ F · f_m ⊗ e_n`, rows indexed `i * d_w + j` and columns
//! `m * d_v + n`. Positions are 0-based: crossing `t` acts on factors `t, t+1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactscalar::Scalar;
use crate::freealg::{AlgebraSpec, Element, GenId, Generator, Word};
use crate::grading::{Grade, GradeGroup, PhaseConvention, SigmaForm};
use crate::linalg::{self, Matrix};
use crate::report::{Report, Verdict};

#[derive(Debug, Clone)]
pub struct DiagonalBraiding {
    conv: PhaseConvention,
    form: SigmaForm,
    group: GradeGroup,
    fwd: Vec<Scalar>,
    inv: Vec<Scalar>,
}

impl DiagonalBraiding {
    pub fn convention(&self) -> PhaseConvention {
        self.conv
    }

    pub fn form(&self) -> &SigmaForm {
        &self.form
    }

    /// ε·ζ_n^σ(v,w).
    pub fn phase(&self, v: &Grade, w: &Grade) -> &Scalar {
        &self.fwd[self.slot(v, w)]
    }

    pub fn inverse_phase(&self, v: &Grade, w: &Grade) -> &Scalar {
        &self.inv[self.slot(v, w)]
    }

    fn slot(&self, v: &Grade, w: &Grade) -> usize {
        self.group.index(v) * self.group.order() + self.group.index(w)
    }
}

#[derive(Debug, Clone)]
pub struct MatrixComponent {
    pub matrix: Matrix,
    inverse: Option<Matrix>,
}

impl MatrixComponent {
    pub fn inverse(&self) -> Option<&Matrix> {
        self.inverse.as_ref()
    }
}

#[derive(Debug, Clone)]
pub struct MatrixBraiding {
    group: GradeGroup,
    dims: BTreeMap<Grade, usize>,
    components: BTreeMap<(Grade, Grade), MatrixComponent>,
}

impl MatrixBraiding {
    pub fn dims(&self) -> &BTreeMap<Grade, usize> {
        &self.dims
    }

    pub fn component(&self, v: &Grade, w: &Grade) -> Result<&MatrixComponent> {
        self.components
            .get(&(v.clone(), w.clone()))
            .ok_or_else(|| Error::MissingComponent(format!("{v},{w}")))
    }
}

#[derive(Debug, Clone)]
pub enum Braiding {
    Diagonal(DiagonalBraiding),
    Matrix(MatrixBraiding),
}

/// One letter of a braid word: `b_{position+1}` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BraidLetter {
    pub position: usize,
    pub inverse: bool,
}

impl BraidLetter {
    pub fn b(position: usize) -> BraidLetter {
        BraidLetter {
            position,
            inverse: false,
        }
    }

    pub fn inv(position: usize) -> BraidLetter {
        BraidLetter {
            position,
            inverse: true,
        }
    }

    pub fn inverted(self) -> BraidLetter {
        BraidLetter {
            position: self.position,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.position + 1)?;
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl FromStr for BraidLetter {
    type Err = Error;

    /// Accepts `b1`, `b2^-1`, `b2inv`, `b1'`.
    fn from_str(s: &str) -> Result<BraidLetter> {
        let t = s.trim();
        let bad = || Error::Usage(format!("bad braid letter `{s}`"));
        let rest = t.strip_prefix('b').ok_or_else(bad)?;
        let (num, inverse) = if let Some(n) = rest.strip_suffix("^-1") {
            (n, true)
        } else if let Some(n) = rest.strip_suffix("inv") {
            (n, true)
        } else if let Some(n) = rest.strip_suffix('\'') {
            (n, true)
        } else {
            (rest, false)
        };
        let k: usize = num.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        Ok(BraidLetter {
            position: k - 1,
            inverse,
        })
    }
}

/// Order in which a block crossing is decomposed into letter crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockOrder {
    /// Letters of the left block cross the right block one at a time, last letter first.
    LeftFirst,
    /// Letters of the right block cross the left block one at a time, first letter first.
    RightFirst,
}

/// Adjacent positions (relative to the block start) realising Ψ_{U,V} for |U| = p, |V| = q.
pub fn block_crossings(p: usize, q: usize, order: BlockOrder) -> Vec<usize> {
    let mut out = Vec::with_capacity(p * q);
    match order {
        BlockOrder::LeftFirst => {
            for i in (0..p).rev() {
                out.extend(i..i + q);
            }
        }
        BlockOrder::RightFirst => {
            for j in 0..q {
                out.extend((j..j + p).rev());
            }
        }
    }
    out
}

impl Braiding {
    pub fn diagonal(conv: PhaseConvention, form: SigmaForm) -> Result<Braiding> {
        if conv.modulus != form.modulus {
            return Err(Error::Shape(format!(
                "convention modulus {} differs from form modulus {}",
                conv.modulus, form.modulus
            )));
        }
        let group = form.group();
        let els = group.elements();
        let mut fwd = Vec::with_capacity(els.len() * els.len());
        let mut inv = Vec::with_capacity(els.len() * els.len());
        for v in &els {
            for w in &els {
                let p = conv.phase_for_sigma(form.sigma_unchecked(v, w));
                inv.push(p.inv().expect("phases are units"));
                fwd.push(p);
            }
        }
        Ok(Braiding::Diagonal(DiagonalBraiding {
            conv,
            form,
            group,
            fwd,
            inv,
        }))
    }

    /// Matrix braiding; components must cover every ordered pair of declared grades.
    pub fn matrix(
        group: GradeGroup,
        dims: BTreeMap<Grade, usize>,
        components: Vec<((Grade, Grade), Matrix)>,
    ) -> Result<Braiding> {
        for (g, &d) in &dims {
            if !group.contains(g) {
                return Err(Error::InvalidGrade {
                    grade: g.0.iter().map(|&r| r as i64).collect(),
                    modulus: group.modulus,
                    rank: group.rank,
                });
            }
            if d == 0 {
                return Err(Error::InvalidBraiding(format!("grade {g} has dimension 0")));
            }
        }
        let mut map = BTreeMap::new();
        for ((v, w), m) in components {
            let (dv, dw) = match (dims.get(&v), dims.get(&w)) {
                (Some(&a), Some(&b)) => (a, b),
                _ => {
                    return Err(Error::InvalidBraiding(format!(
                        "component {v},{w} uses an undeclared grade"
                    )))
                }
            };
            let n = dv * dw;
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidBraiding(format!(
                    "component {v},{w} must be {n}x{n}"
                )));
            }
            let inverse = linalg::inverse(&m);
            if map
                .insert((v.clone(), w.clone()), MatrixComponent { matrix: m, inverse })
                .is_some()
            {
                return Err(Error::InvalidBraiding(format!("duplicate component {v},{w}")));
            }
        }
        for v in dims.keys() {
            for w in dims.keys() {
                if !map.contains_key(&(v.clone(), w.clone())) {
                    return Err(Error::MissingComponent(format!("{v},{w}")));
                }
            }
        }
        Ok(Braiding::Matrix(MatrixBraiding {
            group,
            dims,
            components: map,
        }))
    }

    /// Plain swap on every pair of the given components.
    pub fn swap(group: GradeGroup, dims: BTreeMap<Grade, usize>) -> Result<Braiding> {
        let comps = dims
            .iter()
            .flat_map(|(v, &dv)| {
                dims.iter().map(move |(w, &dw)| {
                    let n = dv * dw;
                    let mut m = vec![vec![Scalar::zero(); n]; n];
                    for i in 0..dv {
                        for j in 0..dw {
                            m[i * dw + j][j * dv + i] = Scalar::one();
                        }
                    }
                    ((v.clone(), w.clone()), m)
                })
            })
            .collect();
        Braiding::matrix(group, dims, comps)
    }

    /// Jimbo's sl2 R-matrix in braid form on one two-dimensional component of Z_2:
    /// diag entries q, off-diagonal swap with q - 1/q on the (2,1) slot.
    pub fn jimbo(q: Scalar) -> Result<Braiding> {
        let group = GradeGroup::new(2, 1)?;
        let z = Scalar::zero;
        let q_inv = q.inv()?;
        let m = vec![
            vec![q.clone(), z(), z(), z()],
            vec![z(), z(), Scalar::one(), z()],
            vec![z(), Scalar::one(), &q - &q_inv, z()],
            vec![z(), z(), z(), q],
        ];
        let g = group.zero();
        Braiding::matrix(group, BTreeMap::from([(g.clone(), 2)]), vec![((g.clone(), g), m)])
    }

    pub fn group(&self) -> GradeGroup {
        match self {
            Braiding::Diagonal(d) => d.group,
            Braiding::Matrix(m) => m.group,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self, Braiding::Diagonal(_))
    }

    pub fn as_diagonal(&self) -> Option<&DiagonalBraiding> {
        match self {
            Braiding::Diagonal(d) => Some(d),
            Braiding::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&MatrixBraiding> {
        match self {
            Braiding::Diagonal(_) => None,
            Braiding::Matrix(m) => Some(m),
        }
    }

    /// Grades on which the braiding is defined: the whole group for diagonal braidings.
    pub fn grades(&self) -> Vec<Grade> {
        match self {
            Braiding::Diagonal(d) => d.group.elements(),
            Braiding::Matrix(m) => m.dims.keys().cloned().collect(),
        }
    }

    pub fn dim(&self, g: &Grade) -> usize {
        match self {
            Braiding::Diagonal(_) => 1,
            Braiding::Matrix(m) => m.dims.get(g).copied().unwrap_or(0),
        }
    }

    /// Algebra with `dim(g)` basis generators per defined grade, ids `e(grade)_i`.
    pub fn basis_spec(&self) -> Arc<AlgebraSpec> {
        let gens = self
            .grades()
            .into_iter()
            .flat_map(|g| {
                (0..self.dim(&g)).map(move |i| Generator::new(format!("e{g}_{i}"), g.clone()))
            })
            .collect();
        AlgebraSpec::new(self.group(), gens).expect("grades come from the group")
    }

    /// Ψ (or Ψ⁻¹) on the letter pair x ⊗ y.
    pub fn cross(&self, spec: &AlgebraSpec, x: GenId, y: GenId, inverse: bool) -> Result<Vec<(GenId, GenId, Scalar)>> {
        let (gx, gy) = (spec.grade(x), spec.grade(y));
        match self {
            Braiding::Diagonal(d) => {
                let c = if inverse {
                    d.inverse_phase(gy, gx).clone()
                } else {
                    d.phase(gx, gy).clone()
                };
                Ok(vec![(y, x, c)])
            }
            Braiding::Matrix(m) => {
                let (bx, by) = (spec.basis(gx), spec.basis(gy));
                for (g, b) in [(gx, bx), (gy, by)] {
                    let d = m.dims.get(g).copied().unwrap_or(0);
                    if d != b.len() {
                        return Err(Error::InvalidBraiding(format!(
                            "grade {g} has {} generators but component dimension {d}",
                            b.len()
                        )));
                    }
                }
                let (i, j) = (spec.local_index(x), spec.local_index(y));
                let (dx, dy) = (bx.len(), by.len());
                let mut out = Vec::new();
                if inverse {
                    // Ψ_{gy,gx}⁻¹ maps A_gx ⊗ A_gy back to A_gy ⊗ A_gx.
                    let comp = m.component(gy, gx)?;
                    let g = comp
                        .inverse
                        .as_ref()
                        .ok_or_else(|| Error::NotInvertible(format!("{gy},{gx}")))?;
                    let row = &g[i * dy + j];
                    for p in 0..dy {
                        for q in 0..dx {
                            let c = &row[p * dx + q];
                            if !c.is_zero() {
                                out.push((by[p], bx[q], c.clone()));
                            }
                        }
                    }
                } else {
                    let comp = m.component(gx, gy)?;
                    let row = &comp.matrix[i * dy + j];
                    for p in 0..dy {
                        for q in 0..dx {
                            let c = &row[p * dx + q];
                            if !c.is_zero() {
                                out.push((by[p], bx[q], c.clone()));
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Braid factors `t, t+1` of every word of `x`.
    pub fn apply_pair(&self, x: &Element, t: usize, inverse: bool) -> Result<Element> {
        let spec = x.spec();
        let mut out = Element::zero(spec);
        for (w, c) in x.terms() {
            if w.len() < t + 2 {
                return Err(Error::WordTooShort {
                    position: t,
                    length: w.len(),
                });
            }
            for (p, q, k) in self.cross(spec, w[t], w[t + 1], inverse)? {
                let mut nw: Word = w.clone();
                nw[t] = p;
                nw[t + 1] = q;
                out.add_term(nw, c * &k);
            }
        }
        Ok(out)
    }

    pub fn apply_letters(&self, x: &Element, letters: &[BraidLetter]) -> Result<Element> {
        letters
            .iter()
            .try_fold(x.clone(), |acc, l| self.apply_pair(&acc, l.position, l.inverse))
    }

    /// Block braiding Ψ_{U,V} of the adjacent blocks `[start, start+p)` and `[start+p, start+p+q)`.
    pub fn braid_blocks(
        &self,
        x: &Element,
        start: usize,
        p: usize,
        q: usize,
        order: BlockOrder,
        inverse: bool,
    ) -> Result<Element> {
        let letters: Vec<BraidLetter> = if inverse {
            // Ψ_{U,V}⁻¹ with the current blocks V (length p) then U (length q).
            block_crossings(q, p, order)
                .into_iter()
                .rev()
                .map(|k| BraidLetter::inv(start + k))
                .collect()
        } else {
            block_crossings(p, q, order)
                .into_iter()
                .map(|k| BraidLetter::b(start + k))
                .collect()
        };
        self.apply_letters(x, &letters)
    }
}

/// Composite of adjacent-pair braidings on `arity` tensor factors, in application order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandOperator {
    arity: usize,
    letters: Vec<BraidLetter>,
}

impl StrandOperator {
    pub fn new(arity: usize, letters: Vec<BraidLetter>) -> Result<StrandOperator> {
        if let Some(l) = letters.iter().find(|l| l.position + 1 >= arity) {
            return Err(Error::Usage(format!("{l} is out of range for {arity} strands")));
        }
        Ok(StrandOperator { arity, letters })
    }

    pub fn identity(arity: usize) -> StrandOperator {
        StrandOperator {
            arity,
            letters: Vec::new(),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &StrandOperator) -> StrandOperator {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        StrandOperator {
            arity: self.arity.max(other.arity),
            letters,
        }
    }

    pub fn inverse(&self) -> StrandOperator {
        StrandOperator {
            arity: self.arity,
            letters: self.letters.iter().rev().map(|l| l.inverted()).collect(),
        }
    }

    /// Underlying factor permutation: output factor `t` is input factor `perm[t]`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.arity).collect();
        for l in &self.letters {
            perm.swap(l.position, l.position + 1);
        }
        perm
    }

    /// Apply with every letter of a word being one tensor factor.
    pub fn apply(&self, psi: &Braiding, x: &Element) -> Result<Element> {
        psi.apply_letters(x, &self.letters)
    }

    /// Apply to words made of consecutive factor blocks of the given lengths.
    pub fn apply_blocks(&self, psi: &Braiding, x: &Element, lens: &[usize]) -> Result<Element> {
        if lens.len() != self.arity {
            return Err(Error::Shape(format!(
                "{} block lengths for {} strands",
                lens.len(),
                self.arity
            )));
        }
        let mut lens = lens.to_vec();
        let mut acc = x.clone();
        for l in &self.letters {
            let t = l.position;
            let start: usize = lens[..t].iter().sum();
            acc = psi.braid_blocks(&acc, start, lens[t], lens[t + 1], BlockOrder::LeftFirst, l.inverse)?;
            lens.swap(t, t + 1);
        }
        Ok(acc)
    }
}

impl fmt::Display for StrandOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self.letters.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Named three-strand composites from the left and right braid chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    LeftIdentity,
    LeftSwap,
    LeftReverse,
    LeftFullTwist,
    RightIdentity,
    RightSwap,
    RightReverse,
    RightFullTwist,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::LeftIdentity,
        Preset::LeftSwap,
        Preset::LeftReverse,
        Preset::LeftFullTwist,
        Preset::RightIdentity,
        Preset::RightSwap,
        Preset::RightReverse,
        Preset::RightFullTwist,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::LeftIdentity => "left-identity",
            Preset::LeftSwap => "left-swap",
            Preset::LeftReverse => "left-reverse",
            Preset::LeftFullTwist => "left-full-twist",
            Preset::RightIdentity => "right-identity",
            Preset::RightSwap => "right-swap",
            Preset::RightReverse => "right-reverse",
            Preset::RightFullTwist => "right-full-twist",
        }
    }

    pub fn letters(&self) -> Vec<BraidLetter> {
        let b = BraidLetter::b;
        match self {
            Preset::LeftIdentity | Preset::RightIdentity => vec![],
            Preset::LeftSwap => vec![b(0)],
            Preset::LeftReverse => vec![b(0), b(1), b(0)],
            Preset::LeftFullTwist => vec![b(0), b(1), b(0), b(1)],
            Preset::RightSwap => vec![b(1)],
            Preset::RightReverse => vec![b(1), b(0), b(1)],
            Preset::RightFullTwist => vec![b(1), b(0), b(1), b(0)],
        }
    }

    pub fn operator(&self) -> StrandOperator {
        StrandOperator {
            arity: 3,
            letters: self.letters(),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown preset `{s}`")))
    }
}

pub fn build_three_strand(letters: &[BraidLetter]) -> Result<StrandOperator> {
    StrandOperator::new(3, letters.to_vec())
}

pub fn parse_braid_word(s: &str) -> Result<Vec<BraidLetter>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

/// Algebra with one generator `x1..xp` per listed grade.
pub fn positional_probe(group: GradeGroup, grades: &[Grade]) -> Result<Arc<AlgebraSpec>> {
    let gens = grades
        .iter()
        .enumerate()
        .map(|(i, g)| Generator::new(format!("x{}", i + 1), g.clone()))
        .collect();
    AlgebraSpec::new(group, gens)
}

pub fn subject(grades: &[&Grade]) -> String {
    let parts: Vec<String> = grades.iter().map(ToString::to_string).collect();
    parts.join("x")
}

fn basis_tensors(spec: &Arc<AlgebraSpec>, grades: &[&Grade]) -> Vec<Element> {
    let mut words: Vec<Word> = vec![Vec::new()];
    for g in grades {
        let b = spec.basis(g);
        words = words
            .into_iter()
            .flat_map(|w| {
                b.iter().map(move |&x| {
                    let mut nw = w.clone();
                    nw.push(x);
                    nw
                })
            })
            .collect();
    }
    words
        .into_iter()
        .map(|w| Element::monomial(spec, w, Scalar::one()))
        .collect()
}

fn compare_on_basis<F, G>(spec: &Arc<AlgebraSpec>, grades: &[&Grade], lhs: F, rhs: G) -> Result<Option<String>>
where
    F: Fn(&Element) -> Result<Element>,
    G: Fn(&Element) -> Result<Element>,
{
    for t in basis_tensors(spec, grades) {
        let d = lhs(&t)?.sub(&rhs(&t)?)?;
        if !d.is_zero() {
            return Ok(Some(format!("on {}: {}", t.render(), d.render())));
        }
    }
    Ok(None)
}

/// Ψ_{w,v} ∘ Ψ_{v,w} = id for every ordered pair of defined grades.
pub fn check_unitarity(psi: &Braiding) -> Result<Report> {
    let spec = psi.basis_spec();
    let grades = psi.grades();
    let pairs: Vec<(&Grade, &Grade)> = grades
        .iter()
        .flat_map(|v| grades.iter().map(move |w| (v, w)))
        .collect();
    let verdicts = pairs
        .par_iter()
        .map(|&(v, w)| {
            let witness = compare_on_basis(
                &spec,
                &[v, w],
                |t| psi.apply_letters(t, &[BraidLetter::b(0), BraidLetter::b(0)]),
                |t| Ok(t.clone()),
            )?;
            let s = subject(&[v, w]);
            Ok(match witness {
                None => Verdict::pass("braiding.unitarity", s),
                Some(w) => Verdict::fail("braiding.unitarity", s, w),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::from_verdicts(verdicts))
}

/// b1 b2 b1 = b2 b1 b2 on every basis tensor of every grade triple.
pub fn check_yang_baxter(psi: &Braiding) -> Result<Report> {
    let spec = psi.basis_spec();
    let grades = psi.grades();
    let mut triples: Vec<[&Grade; 3]> = Vec::new();
    for u in &grades {
        for v in &grades {
            for w in &grades {
                triples.push([u, v, w]);
            }
        }
    }
    let lhs = Preset::LeftReverse.letters();
    let rhs = Preset::RightReverse.letters();
    let verdicts = triples
        .par_iter()
        .map(|tr| {
            let witness = compare_on_basis(
                &spec,
                tr,
                |t| psi.apply_letters(t, &lhs),
                |t| psi.apply_letters(t, &rhs),
            )?;
            let s = subject(tr);
            Ok(match witness {
                None => Verdict::pass("braiding.yang-baxter", s),
                Some(w) => Verdict::fail("braiding.yang-baxter", s, w),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::from_verdicts(verdicts))
}

/// Block-level braid relation: reversing U|V|W by the left chain and by the
/// right chain, each crossing expanded into letter crossings, for block lengths
/// `p, q, r >= 1` with `p + q + r <= max_len`. With unit blocks this is Yang–Baxter.
pub fn check_block_orders(psi: &Braiding, max_len: usize) -> Result<Report> {
    let spec = psi.basis_spec();
    let grades = psi.grades();
    let mut jobs: Vec<([usize; 3], Vec<&Grade>)> = Vec::new();
    for p in 1..max_len {
        for q in 1..max_len {
            for r in 1..max_len {
                let total = p + q + r;
                if total > max_len {
                    continue;
                }
                let mut seqs: Vec<Vec<&Grade>> = vec![Vec::new()];
                for _ in 0..total {
                    seqs = seqs
                        .into_iter()
                        .flat_map(|s| {
                            grades.iter().map(move |g| {
                                let mut n = s.clone();
                                n.push(g);
                                n
                            })
                        })
                        .collect();
                }
                jobs.extend(seqs.into_iter().map(|s| ([p, q, r], s)));
            }
        }
    }
    let left = Preset::LeftReverse.operator();
    let right = Preset::RightReverse.operator();
    let verdicts = jobs
        .par_iter()
        .map(|(lens, gs)| {
            let witness = compare_on_basis(
                &spec,
                gs,
                |t| left.apply_blocks(psi, t, lens),
                |t| right.apply_blocks(psi, t, lens),
            )?;
            let s = format!("{}+{}+{}:{}", lens[0], lens[1], lens[2], subject(gs));
            Ok(match witness {
                None => Verdict::pass("braiding.block-orders", s),
                Some(w) => Verdict::fail("braiding.block-orders", s, w),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::from_verdicts(verdicts))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2(eps: i64, m: Vec<Vec<i64>>) -> Braiding {
        let k = m.len();
        let _ = GradeGroup::new(2, k).unwrap();
        Braiding::diagonal(PhaseConvention::new(eps, 2).unwrap(), SigmaForm::new(2, m).unwrap()).unwrap()
    }

    fn probe(psi: &Braiding, grades: &[&[i64]]) -> Arc<AlgebraSpec> {
        let g = psi.group();
        let gs: Vec<Grade> = grades.iter().map(|r| g.grade(r).unwrap()).collect();
        positional_probe(g, &gs).unwrap()
    }

    #[test]
    fn pair_braiding_examples() {
        let psi = z2(1, vec![vec![1]]);
        let s = probe(&psi, &[&[1], &[1], &[0]]);
        let xy = Element::word(&s, &["x1", "x2"]).unwrap();
        let yx = Element::word(&s, &["x2", "x1"]).unwrap();
        assert_eq!(psi.apply_pair(&xy, 0, false).unwrap(), yx.neg());
        let xz = Element::word(&s, &["x1", "x3"]).unwrap();
        assert_eq!(
            psi.apply_pair(&xz, 0, false).unwrap(),
            Element::word(&s, &["x3", "x1"]).unwrap()
        );
        let back = psi.apply_pair(&psi.apply_pair(&xy, 0, false).unwrap(), 0, true).unwrap();
        assert_eq!(back, xy);
        assert_eq!(
            psi.apply_pair(&Element::word(&s, &["x1"]).unwrap(), 0, false),
            Err(Error::WordTooShort { position: 0, length: 1 })
        );
    }

    #[test]
    fn presets_on_odd_grades() {
        let psi = z2(1, vec![vec![1]]);
        let s = probe(&psi, &[&[1], &[1], &[1]]);
        let abc = Element::word(&s, &["x1", "x2", "x3"]).unwrap();
        let w = |ids: &[&str]| Element::word(&s, ids).unwrap();
        assert_eq!(Preset::LeftIdentity.operator().apply(&psi, &abc).unwrap(), abc);
        assert_eq!(
            Preset::LeftReverse.operator().apply(&psi, &abc).unwrap(),
            w(&["x3", "x2", "x1"]).neg()
        );
        // four crossings, sign (-1)^4, and the chain ends on c.a.b
        assert_eq!(
            Preset::LeftFullTwist.operator().apply(&psi, &abc).unwrap(),
            w(&["x3", "x1", "x2"])
        );
        assert_eq!(
            Preset::RightFullTwist.operator().apply(&psi, &abc).unwrap(),
            w(&["x2", "x3", "x1"])
        );
        let round = build_three_strand(&[BraidLetter::b(0), BraidLetter::inv(0)]).unwrap();
        assert_eq!(round.apply(&psi, &abc).unwrap(), abc);
        assert!(build_three_strand(&[BraidLetter::b(2)]).is_err());
        assert_eq!(Preset::LeftFullTwist.operator().permutation(), vec![2, 0, 1]);
    }

    #[test]
    fn braid_word_parsing() {
        let w = parse_braid_word("b1 b2^-1, b1inv b2'").unwrap();
        assert_eq!(
            w,
            vec![BraidLetter::b(0), BraidLetter::inv(1), BraidLetter::inv(0), BraidLetter::inv(1)]
        );
        assert!(parse_braid_word("b0").is_err());
        assert!(parse_braid_word("c1").is_err());
        assert_eq!(
            "left-full-twist".parse::<Preset>().unwrap(),
            Preset::LeftFullTwist
        );
    }

    #[test]
    fn unitarity_examples() {
        let n3 = Braiding::diagonal(PhaseConvention::plus(3), SigmaForm::new(3, vec![vec![1]]).unwrap()).unwrap();
        let r = check_unitarity(&n3).unwrap();
        let bad: Vec<&str> = r.failures().map(|v| v.subject.as_str()).collect();
        assert!(bad.contains(&"(1)x(1)"));
        assert!(check_unitarity(&z2(1, vec![vec![1, 0], vec![0, 1]])).unwrap().all_pass());
        assert!(!check_unitarity(&z2(1, vec![vec![0, 1], vec![0, 0]])).unwrap().all_pass());
        let g = GradeGroup::new(2, 1).unwrap();
        let dims: BTreeMap<Grade, usize> = [(g.zero(), 2), (g.grade(&[1]).unwrap(), 1)].into();
        let swap = Braiding::swap(g, dims).unwrap();
        assert!(check_unitarity(&swap).unwrap().all_pass());
        assert!(check_yang_baxter(&swap).unwrap().all_pass());
    }

    #[test]
    fn diagonal_yang_baxter_and_blocks() {
        for m in SigmaForm::enumerate(GradeGroup::new(3, 1).unwrap()) {
            for eps in [1, -1] {
                let psi = Braiding::diagonal(PhaseConvention::new(eps, 3).unwrap(), m.clone()).unwrap();
                assert!(check_yang_baxter(&psi).unwrap().all_pass());
                assert!(check_block_orders(&psi, 4).unwrap().all_pass());
            }
        }
    }

    #[test]
    fn broken_component_fails_yang_baxter() {
        let g = GradeGroup::new(2, 1).unwrap();
        let e = g.zero();
        let dims: BTreeMap<Grade, usize> = [(e.clone(), 2)].into();
        let i = |x: i64| Scalar::int(x);
        // Jimbo-type R with the lower-right entry doubled.
        let m = vec![
            vec![i(2), i(0), i(0), i(0)],
            vec![i(0), i(0), i(1), i(0)],
            vec![i(0), i(1), Scalar::from(crate::Rat::new(3, 2).unwrap()), i(0)],
            vec![i(0), i(0), i(0), i(4)],
        ];
        let psi = Braiding::matrix(g, dims.clone(), vec![((e.clone(), e.clone()), m)]).unwrap();
        let r = check_yang_baxter(&psi).unwrap();
        assert!(!r.all_pass());
        assert!(!check_block_orders(&psi, 4).unwrap().all_pass());
        let psi = Braiding::matrix(g, dims, vec![((e.clone(), e), jimbo(2))]).unwrap();
        assert!(check_yang_baxter(&psi).unwrap().all_pass());
        assert!(check_block_orders(&psi, 4).unwrap().all_pass());
    }

    fn jimbo(q: i64) -> Matrix {
        let i = |x: i64| Scalar::int(x);
        let qq = Scalar::from(crate::Rat::new(q * q - 1, q).unwrap());
        vec![
            vec![i(q), i(0), i(0), i(0)],
            vec![i(0), i(0), i(1), i(0)],
            vec![i(0), i(1), qq, i(0)],
            vec![i(0), i(0), i(0), i(q)],
        ]
    }

    #[test]
    fn matrix_inverse_round_trip() {
        let g = GradeGroup::new(2, 1).unwrap();
        let e = g.zero();
        let dims: BTreeMap<Grade, usize> = [(e.clone(), 2)].into();
        let psi = Braiding::matrix(g, dims, vec![((e.clone(), e), jimbo(2))]).unwrap();
        let spec = psi.basis_spec();
        let ids: Vec<String> = spec.generators().iter().map(|g| g.id.clone()).collect();
        for a in &ids {
            for b in &ids {
                let t = Element::word(&spec, &[a, b]).unwrap();
                let f = psi.apply_pair(&t, 0, false).unwrap();
                assert_eq!(psi.apply_pair(&f, 0, true).unwrap(), t);
                let r = psi.apply_pair(&t, 0, true).unwrap();
                assert_eq!(psi.apply_pair(&r, 0, false).unwrap(), t);
            }
        }
    }

    #[test]
    fn missing_component_and_singular() {
        let g = GradeGroup::new(2, 1).unwrap();
        let (e, o) = (g.zero(), g.grade(&[1]).unwrap());
        let dims: BTreeMap<Grade, usize> = [(e.clone(), 1), (o.clone(), 1)].into();
        let one = vec![vec![Scalar::one()]];
        let r = Braiding::matrix(g, dims.clone(), vec![((e.clone(), e.clone()), one.clone())]);
        assert!(matches!(r, Err(Error::MissingComponent(_))));
        let zero = vec![vec![Scalar::zero()]];
        let comps = vec![
            ((e.clone(), e.clone()), zero),
            ((e.clone(), o.clone()), one.clone()),
            ((o.clone(), e.clone()), one.clone()),
            ((o.clone(), o.clone()), one),
        ];
        let psi = Braiding::matrix(g, dims, comps).unwrap();
        let spec = psi.basis_spec();
        let t = Element::word(&spec, &["e(0)_0", "e(0)_0"]).unwrap();
        assert!(matches!(psi.apply_pair(&t, 0, true), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn strand_operators_preserve_grade_multiset() {
        let psi = z2(-1, vec![vec![1, 1], vec![0, 1]]);
        let s = probe(&psi, &[&[1, 0], &[0, 1], &[1, 1]]);
        let abc = Element::word(&s, &["x1", "x2", "x3"]).unwrap();
        for p in Preset::ALL {
            let op = p.operator();
            let out = op.apply(&psi, &abc).unwrap();
            assert_eq!(out.len(), 1);
            let (w, _) = out.terms().iter().next().unwrap();
            let expect: Vec<GenId> = op.permutation().iter().map(|&i| i as GenId).collect();
            assert_eq!(w, &expect, "{}", p.name());
            let back = op.inverse().apply(&psi, &out).unwrap();
            assert_eq!(back, abc);
        }
    }

    #[test]
    fn block_decompositions_agree() {
        let g = GradeGroup::new(2, 1).unwrap();
        let e = g.zero();
        let dims: BTreeMap<Grade, usize> = [(e.clone(), 2)].into();
        let psi = Braiding::matrix(g, dims, vec![((e.clone(), e), jimbo(3))]).unwrap();
        let spec = psi.basis_spec();
        let x = Element::word(&spec, &["e(0)_0", "e(0)_1", "e(0)_1", "e(0)_0", "e(0)_1"]).unwrap();
        for (p, q) in [(1, 1), (2, 2), (2, 3), (3, 2), (1, 4)] {
            let a = psi.braid_blocks(&x, 0, p, q, BlockOrder::LeftFirst, false).unwrap();
            let b = psi.braid_blocks(&x, 0, p, q, BlockOrder::RightFirst, false).unwrap();
            assert_eq!(a, b);
            assert_eq!(psi.braid_blocks(&a, 0, q, p, BlockOrder::RightFirst, true).unwrap(), x);
        }
    }

    #[test]
    fn block_strands_match_letter_strands() {
        let psi = z2(-1, vec![vec![1, 1], vec![0, 1]]);
        let s = probe(&psi, &[&[1, 0], &[0, 1], &[1, 1], &[1, 0]]);
        let w = Element::word(&s, &["x1", "x2", "x3", "x4"]).unwrap();
        let op = Preset::LeftReverse.operator();
        let blocks = op.apply_blocks(&psi, &w, &[1, 1, 2]).unwrap();
        // reverse of a|b|cd as blocks: cd|b|a
        let (word, _) = blocks.terms().iter().next().unwrap();
        assert_eq!(word, &vec![2, 3, 1, 0]);
        let inv = op.inverse().apply_blocks(&psi, &blocks, &[2, 1, 1]).unwrap();
        assert_eq!(inv, w);
    }
}
