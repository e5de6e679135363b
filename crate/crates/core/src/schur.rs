//! Three-fold tensor decomposition: braided Young symmetrizers as explicit
//! operators, exact ranks, and the classical dimension bookkeeping.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::braiding::{BraidLetter, Braiding, StrandOperator};
use crate::error::{Error, Result};
use crate::exactscalar::Scalar;
use crate::freealg::{AlgebraSpec, Element, Generator, Word};
use crate::grading::Grade;
use crate::linalg::{self, Matrix};
use crate::ternary::Side;

/// Permutations of three tensor factors. Output factor `t` is input factor `images()[t]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Perm {
    E1,
    E12,
    E13,
    E23,
    /// a⊗b⊗c -> b⊗c⊗a
    E123,
    /// a⊗b⊗c -> c⊗a⊗b
    E132,
}

impl Perm {
    pub const ALL: [Perm; 6] = [Perm::E1, Perm::E12, Perm::E13, Perm::E23, Perm::E123, Perm::E132];

    pub fn images(self) -> [usize; 3] {
        match self {
            Perm::E1 => [0, 1, 2],
            Perm::E12 => [1, 0, 2],
            Perm::E13 => [2, 1, 0],
            Perm::E23 => [0, 2, 1],
            Perm::E123 => [1, 2, 0],
            Perm::E132 => [2, 0, 1],
        }
    }

    fn from_images(p: [usize; 3]) -> Perm {
        *Perm::ALL.iter().find(|q| q.images() == p).expect("a permutation of three")
    }

    /// `self` applied after `first`.
    pub fn after(self, first: Perm) -> Perm {
        let (p, q) = (self.images(), first.images());
        Perm::from_images([q[p[0]], q[p[1]], q[p[2]]])
    }

    pub fn sign(self) -> i64 {
        match self {
            Perm::E1 | Perm::E123 | Perm::E132 => 1,
            _ => -1,
        }
    }

    /// Braid realization along the left (b1-first) or right (b2-first) chain.
    pub fn braid(self, side: Side) -> Vec<BraidLetter> {
        let b = BraidLetter::b;
        match (self, side) {
            (Perm::E1, _) => vec![],
            (Perm::E12, _) => vec![b(0)],
            (Perm::E23, _) => vec![b(1)],
            (Perm::E13, Side::Left) => vec![b(0), b(1), b(0)],
            (Perm::E13, Side::Right) => vec![b(1), b(0), b(1)],
            (Perm::E132, _) => vec![b(0), b(1), b(0), b(1)],
            (Perm::E123, _) => vec![b(1), b(0), b(1), b(0)],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Perm::E1 => "e1",
            Perm::E12 => "e12",
            Perm::E13 => "e13",
            Perm::E23 => "e23",
            Perm::E123 => "e123",
            Perm::E132 => "e132",
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Formal combination of permutations. `side` picks the braid chain used for each term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermOp {
    pub side: Side,
    pub terms: Vec<(Perm, Scalar)>,
}

impl PermOp {
    pub fn new(side: Side, terms: Vec<(Perm, Scalar)>) -> PermOp {
        PermOp { side, terms }
    }

    pub fn ints(side: Side, terms: &[(Perm, i64)]) -> PermOp {
        PermOp::new(side, terms.iter().map(|(p, c)| (*p, Scalar::int(*c))).collect())
    }

    /// Group-algebra product: `self` applied after `first`.
    pub fn after(&self, first: &PermOp) -> PermOp {
        let mut acc: Vec<(Perm, Scalar)> = Vec::new();
        for (p, a) in &self.terms {
            for (q, b) in &first.terms {
                let r = p.after(*q);
                let c = a * b;
                match acc.iter_mut().find(|(x, _)| *x == r) {
                    Some((_, v)) => *v = &*v + &c,
                    None => acc.push((r, c)),
                }
            }
        }
        acc.retain(|(_, c)| !c.is_zero());
        PermOp::new(self.side, acc)
    }

    /// Action through the braiding; each permutation acts as its braid composite.
    pub fn apply(&self, psi: &Braiding, x: &Element) -> Result<Element> {
        let mut out = Element::zero(x.spec());
        for (p, c) in &self.terms {
            let op = StrandOperator::new(3, p.braid(self.side))?;
            out.axpy(c, &op.apply(psi, x)?)?;
        }
        Ok(out)
    }

    /// Plain place permutation of the three factors.
    pub fn apply_plain(&self, x: &Element) -> Result<Element> {
        x.map_words(|w| {
            if w.len() != 3 {
                return Err(Error::Shape(format!("word of length {} is not a 3-fold tensor", w.len())));
            }
            let mut out = Element::zero(x.spec());
            for (p, c) in &self.terms {
                let im = p.images();
                out.add_term(vec![w[im[0]], w[im[1]], w[im[2]]], c.clone());
            }
            Ok(out)
        })
    }
}

impl fmt::Display for PermOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("{c}*{p}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Left,
    Right,
}

impl FromStr for Which {
    type Err = Error;
    fn from_str(s: &str) -> Result<Which> {
        match s {
            "left" => Ok(Which::Left),
            "right" => Ok(Which::Right),
            _ => Err(Error::Usage(format!("which must be left or right (got `{s}`)"))),
        }
    }
}

/// Braided symmetrizer with its chain coefficients on one grade triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidedSymmetrizer {
    pub op: PermOp,
    /// Scalar picked up by each chain on the probe tensor; `None` for non-diagonal braidings.
    pub coefficients: Option<Vec<(Perm, Scalar)>>,
}

/// e1 + Ψ e12 + Ψ³ e13 + Ψ⁴ e132 (left) or e1 + Ψ e23 + Ψ³ e13 + Ψ⁴ e123 (right).
pub fn braided_symmetrizer(psi: &Braiding, grades: &[Grade; 3], which: Which) -> Result<BraidedSymmetrizer> {
    let (side, perms) = match which {
        Which::Left => (Side::Left, [Perm::E1, Perm::E12, Perm::E13, Perm::E132]),
        Which::Right => (Side::Right, [Perm::E1, Perm::E23, Perm::E13, Perm::E123]),
    };
    for g in grades {
        if !psi.group().contains(g) {
            return Err(Error::InvalidGrade {
                grade: g.0.iter().map(|&x| x as i64).collect(),
                modulus: psi.group().modulus,
                rank: psi.group().rank,
            });
        }
    }
    if let Braiding::Matrix(m) = psi {
        for v in grades {
            for w in grades {
                m.component(v, w)?;
            }
        }
    }
    let op = PermOp::new(side, perms.iter().map(|p| (*p, Scalar::one())).collect());
    let coefficients = match psi {
        Braiding::Diagonal(_) => {
            let spec = crate::braiding::positional_probe(psi.group(), grades)?;
            let x = Element::monomial(&spec, vec![0, 1, 2], Scalar::one());
            let mut cs = Vec::new();
            for p in perms {
                let y = StrandOperator::new(3, p.braid(side))?.apply(psi, &x)?;
                let im = p.images();
                cs.push((p, y.coeff(&[im[0] as u32, im[1] as u32, im[2] as u32])));
            }
            Some(cs)
        }
        Braiding::Matrix(_) => None,
    };
    Ok(BraidedSymmetrizer { op, coefficients })
}

/// Exact matrix of an operator on a chosen basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub basis: Vec<Word>,
    pub matrix: Matrix,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn operator_rank(op: &OperatorMatrix) -> usize {
    linalg::rank(&op.matrix)
}

/// Algebra with `dims[i]` generators of grade `grades[i]` (ids `e(grade)_j`); coinciding
/// grades must declare the same dimension. Matrix braidings fix the dimensions.
pub fn tensor_spec(psi: &Braiding, grades: &[Grade; 3], dims: &[usize; 3]) -> Result<Arc<AlgebraSpec>> {
    let mut decl: Vec<(Grade, usize)> = Vec::new();
    for (g, &d) in grades.iter().zip(dims) {
        if d == 0 {
            return Err(Error::Shape(format!("dimension 0 for grade {g}")));
        }
        if let Braiding::Matrix(_) = psi {
            if psi.dim(g) != d {
                return Err(Error::Shape(format!(
                    "grade {g}: braiding component dimension {} but {d} requested",
                    psi.dim(g)
                )));
            }
        }
        match decl.iter().find(|(h, _)| h == g) {
            Some((_, e)) if *e != d => {
                return Err(Error::Shape(format!("grade {g} given dimensions {e} and {d}")));
            }
            Some(_) => {}
            None => decl.push((g.clone(), d)),
        }
    }
    decl.sort();
    let gens = decl
        .iter()
        .flat_map(|(g, d)| (0..*d).map(move |i| Generator::new(format!("e{g}_{i}"), g.clone())))
        .collect();
    AlgebraSpec::new(psi.group(), gens)
}

/// Basis of the span of all factor orderings of V_{g1} ⊗ V_{g2} ⊗ V_{g3}.
fn permuted_basis(spec: &AlgebraSpec, grades: &[Grade; 3]) -> Vec<Word> {
    let mut words = Vec::new();
    let mut orders: Vec<[usize; 3]> = Perm::ALL.iter().map(|p| p.images()).collect();
    orders.sort();
    orders.dedup_by_key(|o| [grades[o[0]].clone(), grades[o[1]].clone(), grades[o[2]].clone()]);
    for o in orders {
        for &x in spec.basis(&grades[o[0]]) {
            for &y in spec.basis(&grades[o[1]]) {
                for &z in spec.basis(&grades[o[2]]) {
                    words.push(vec![x, y, z]);
                }
            }
        }
    }
    words.sort();
    words.dedup();
    words
}

fn assemble(spec: &Arc<AlgebraSpec>, grades: &[Grade; 3], f: impl Fn(&Element) -> Result<Element>) -> Result<OperatorMatrix> {
    let basis = permuted_basis(spec, grades);
    let n = basis.len();
    let mut matrix = vec![vec![Scalar::zero(); n]; n];
    for (col, w) in basis.iter().enumerate() {
        let y = f(&Element::monomial(spec, w.clone(), Scalar::one()))?;
        for (v, c) in y.terms() {
            let row = basis
                .binary_search(v)
                .map_err(|_| Error::Shape(format!("image word {} leaves the basis", spec.render_word(v))))?;
            matrix[row][col] = c.clone();
        }
    }
    Ok(OperatorMatrix { basis, matrix })
}

/// Matrix of the braided action of `op` on the permutation-closed 3-fold tensor space.
pub fn braided_operator_matrix(
    op: &PermOp,
    psi: &Braiding,
    spec: &Arc<AlgebraSpec>,
    grades: &[Grade; 3],
) -> Result<OperatorMatrix> {
    assemble(spec, grades, |x| op.apply(psi, x))
}

/// Matrix of the plain place-permutation action of `op` on A^{⊗3}, dim A = n.
pub fn classical_operator_matrix(op: &PermOp, n: usize) -> Result<OperatorMatrix> {
    let g = crate::grading::GradeGroup::new(1, 1)?;
    let z = g.zero();
    let gens = (0..n).map(|i| Generator::new(format!("e{i}"), z.clone())).collect();
    let spec = AlgebraSpec::new(g, gens)?;
    assemble(&spec, &[z.clone(), z.clone(), z], |x| op.apply_plain(x))
}

pub fn full_symmetrizer() -> PermOp {
    PermOp::ints(Side::Left, &Perm::ALL.map(|p| (p, 1)))
}

pub fn full_antisymmetrizer() -> PermOp {
    PermOp::ints(Side::Left, &Perm::ALL.map(|p| (p, p.sign())))
}

/// Textbook Young symmetrizer (e + (12))(e - (13)).
pub fn young_symmetrizer() -> PermOp {
    let row = PermOp::ints(Side::Left, &[(Perm::E1, 1), (Perm::E12, 1)]);
    let col = PermOp::ints(Side::Left, &[(Perm::E1, 1), (Perm::E13, -1)]);
    row.after(&col)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalDims {
    pub n: usize,
    pub sym: usize,
    pub alt: usize,
    pub mixed: usize,
}

impl ClassicalDims {
    pub fn identity_holds(&self) -> bool {
        self.n.pow(3) == self.sym + self.alt + 2 * self.mixed
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// (C(n+2,3), C(n,3), n(n²-1)/3), with n³ = Sym + Alt + 2·Mixed asserted.
pub fn classical_decomposition_dims(n: usize) -> ClassicalDims {
    let d = ClassicalDims {
        n,
        sym: binom(n + 2, 3),
        alt: binom(n, 3),
        mixed: n * (n * n - 1) / 3,
    };
    assert!(d.identity_holds(), "dimension identity fails at n = {n}");
    d
}

/// Brute-force ranks of the classical symmetric, antisymmetric and Young operators.
pub fn classical_ranks(n: usize) -> Result<ClassicalDims> {
    Ok(ClassicalDims {
        n,
        sym: operator_rank(&classical_operator_matrix(&full_symmetrizer(), n)?),
        alt: operator_rank(&classical_operator_matrix(&full_antisymmetrizer(), n)?),
        mixed: operator_rank(&classical_operator_matrix(&young_symmetrizer(), n)?),
    })
}

/// Ranks of id + swap and id - swap on A^{⊗2}, dim A = n.
pub fn degree_two_ranks(n: usize) -> (usize, usize) {
    let idx = |i: usize, j: usize| i * n + j;
    let mut plus = vec![vec![Scalar::zero(); n * n]; n * n];
    let mut minus = plus.clone();
    for i in 0..n {
        for j in 0..n {
            let c = idx(i, j);
            let r = idx(j, i);
            plus[c][c] = &plus[c][c] + &Scalar::one();
            minus[c][c] = &minus[c][c] + &Scalar::one();
            plus[r][c] = &plus[r][c] + &Scalar::one();
            minus[r][c] = &minus[r][c] - &Scalar::one();
        }
    }
    (linalg::rank(&plus), linalg::rank(&minus))
}
