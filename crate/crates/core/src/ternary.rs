//! Ternary brackets, the deformed binary bracket and the para-algebra identity checkers.
//!
//! Phases between word arguments are block phases: the product of the letter
//! phases, which is what the hexagon rule gives for a diagonal braiding. With
//! ε = +1 this is ζ_n^σ of the two total grades.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::braiding::{positional_probe, subject, Braiding, DiagonalBraiding, MatrixBraiding, Preset};
use crate::error::{Error, Result};
use crate::exactscalar::Scalar;
use crate::freealg::{AlgebraSpec, Element, GenId, Word};
use crate::grading::{phase_of, Grade, PhaseConvention, SigmaForm};
use crate::report::{Report, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Signs {
    Sym,
    Alt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BracketVariant {
    pub side: Side,
    pub signs: Signs,
}

impl BracketVariant {
    pub const LEFT_SYM: BracketVariant = BracketVariant::new(Side::Left, Signs::Sym);
    pub const LEFT_ALT: BracketVariant = BracketVariant::new(Side::Left, Signs::Alt);
    pub const RIGHT_SYM: BracketVariant = BracketVariant::new(Side::Right, Signs::Sym);
    pub const RIGHT_ALT: BracketVariant = BracketVariant::new(Side::Right, Signs::Alt);
    pub const ALL: [BracketVariant; 4] = [
        BracketVariant::LEFT_SYM,
        BracketVariant::LEFT_ALT,
        BracketVariant::RIGHT_SYM,
        BracketVariant::RIGHT_ALT,
    ];

    pub const fn new(side: Side, signs: Signs) -> BracketVariant {
        BracketVariant { side, signs }
    }

    /// Sign of the last two terms.
    fn tail_sign(&self) -> Scalar {
        match self.signs {
            Signs::Sym => Scalar::one(),
            Signs::Alt => Scalar::int(-1),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl fmt::Display for Signs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signs::Sym => "sym",
            Signs::Alt => "alt",
        })
    }
}

impl fmt::Display for BracketVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.side, self.signs)
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Side> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::Usage(format!("side must be left or right (got `{s}`)"))),
        }
    }
}

impl FromStr for Signs {
    type Err = Error;
    fn from_str(s: &str) -> Result<Signs> {
        match s {
            "sym" => Ok(Signs::Sym),
            "alt" => Ok(Signs::Alt),
            _ => Err(Error::Usage(format!("variant must be sym or alt (got `{s}`)"))),
        }
    }
}

/// A trilinear bracket together with the phase it uses between homogeneous arguments.
pub trait TernaryBracket: Sync {
    fn side(&self) -> Side;
    fn bracket(&self, a: &Element, b: &Element, c: &Element) -> Result<Element>;
    /// Braiding phase between two homogeneous arguments.
    fn phase(&self, x: &Element, y: &Element) -> Result<Scalar>;
    /// Whether outputs must stay in the span of the generators.
    fn closed_in_span(&self) -> bool {
        false
    }
}

fn require_diagonal(psi: &Braiding) -> Result<&DiagonalBraiding> {
    psi.as_diagonal()
        .ok_or_else(|| Error::InvalidBraiding("this check needs a diagonal braiding".into()))
}

/// Product of letter phases of `y`'s letters crossing `x`'s letters.
pub fn word_phase(d: &DiagonalBraiding, spec: &AlgebraSpec, x: &[GenId], y: &[GenId]) -> Scalar {
    let gx = spec.word_grade(x);
    let gy = spec.word_grade(y);
    let conv = d.convention();
    let sigma = d.form().sigma_unchecked(&gx, &gy);
    let z = Scalar::phase(sigma as i64, conv.modulus).expect("modulus is positive");
    if conv.epsilon < 0 && (x.len() * y.len()) % 2 == 1 {
        -z
    } else {
        z
    }
}

/// Block phase between two homogeneous elements; every pair of words must agree.
pub fn element_phase(d: &DiagonalBraiding, x: &Element, y: &Element) -> Result<Scalar> {
    let spec = x.spec();
    let (Some(wx), Some(wy)) = (x.terms().keys().next(), y.terms().keys().next()) else {
        return Ok(Scalar::one());
    };
    let p = word_phase(d, spec, wx, wy);
    for u in x.terms().keys() {
        if word_phase(d, spec, u, wy) != p {
            return Err(Error::Inhomogeneous(x.render()));
        }
    }
    for v in y.terms().keys() {
        if word_phase(d, spec, wx, v) != p {
            return Err(Error::Inhomogeneous(y.render()));
        }
    }
    Ok(p)
}

fn cat(parts: &[&[GenId]]) -> Word {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Phase-formula bracket of three words under a diagonal braiding.
fn diagonal_word_bracket(
    variant: BracketVariant,
    d: &DiagonalBraiding,
    spec: &Arc<AlgebraSpec>,
    a: &[GenId],
    b: &[GenId],
    c: &[GenId],
    coeff: &Scalar,
    out: &mut Element,
) {
    let sij = word_phase(d, spec, a, b);
    let sik = word_phase(d, spec, a, c);
    let sjk = word_phase(d, spec, b, c);
    let t = variant.tail_sign();
    match variant.side {
        Side::Left => {
            let p3 = &(&sik * &sjk) * &t;
            let p4 = &p3 * &sij;
            out.add_term(cat(&[a, b, c]), coeff.clone());
            out.add_term(cat(&[b, a, c]), coeff * &sij);
            out.add_term(cat(&[c, a, b]), coeff * &p3);
            out.add_term(cat(&[c, b, a]), coeff * &p4);
        }
        Side::Right => {
            let p3 = &(&sij * &sik) * &t;
            let p4 = &p3 * &sjk;
            out.add_term(cat(&[a, b, c]), coeff.clone());
            out.add_term(cat(&[a, c, b]), coeff * &sjk);
            out.add_term(cat(&[b, c, a]), coeff * &p3);
            out.add_term(cat(&[c, b, a]), coeff * &p4);
        }
    }
}

fn entry<'m>(m: &'m MatrixBraiding, v: &Grade, w: &Grade, i: usize, j: usize, p: usize, q: usize) -> Result<&'m Scalar> {
    let dv = m.dims()[v];
    let dw = m.dims()[w];
    Ok(&m.component(v, w)?.matrix[i * dw + j][p * dv + q])
}

/// Explicit index contraction of the matrix-braided bracket on three generators.
pub fn matrix_contraction(
    variant: BracketVariant,
    m: &MatrixBraiding,
    spec: &Arc<AlgebraSpec>,
    a: GenId,
    b: GenId,
    c: GenId,
) -> Result<Element> {
    let (vi, vj, vk) = (spec.grade(a).clone(), spec.grade(b).clone(), spec.grade(c).clone());
    let dim = |g: &Grade| -> Result<usize> {
        let d = m.dims().get(g).copied().unwrap_or(0);
        if d != spec.basis(g).len() {
            return Err(Error::InvalidBraiding(format!(
                "grade {g} has {} generators but component dimension {d}",
                spec.basis(g).len()
            )));
        }
        Ok(d)
    };
    let (di, dj, dk) = (dim(&vi)?, dim(&vj)?, dim(&vk)?);
    let (bi, bj, bk) = (spec.basis(&vi), spec.basis(&vj), spec.basis(&vk));
    let (i, j, k) = (spec.local_index(a), spec.local_index(b), spec.local_index(c));
    let t = variant.tail_sign();
    let mut out = Element::monomial(spec, vec![a, b, c], Scalar::one());
    match variant.side {
        Side::Left => {
            // Ψ_ij^{mn} f_m e_n g_k, then Ψ_nk^{pq}, Ψ_mp^{rs}, Ψ_sq^{tu}.
            for mm in 0..dj {
                for n in 0..di {
                    let x1 = entry(m, &vi, &vj, i, j, mm, n)?;
                    if x1.is_zero() {
                        continue;
                    }
                    out.add_term(vec![bj[mm], bi[n], c], x1.clone());
                    for p in 0..dk {
                        for q in 0..di {
                            let x2 = entry(m, &vi, &vk, n, k, p, q)?;
                            if x2.is_zero() {
                                continue;
                            }
                            let x12 = x1 * x2;
                            for r in 0..dk {
                                for s in 0..dj {
                                    let x3 = entry(m, &vj, &vk, mm, p, r, s)?;
                                    if x3.is_zero() {
                                        continue;
                                    }
                                    let x123 = &x12 * x3;
                                    out.add_term(vec![bk[r], bj[s], bi[q]], &x123 * &t);
                                    for tt in 0..di {
                                        for u in 0..dj {
                                            let x4 = entry(m, &vj, &vi, s, q, tt, u)?;
                                            if !x4.is_zero() {
                                                out.add_term(vec![bk[r], bi[tt], bj[u]], &(&x123 * x4) * &t);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Side::Right => {
            // Ψ_jk^{mn} e_i g_m f_n, then Ψ_im^{pq}, Ψ_qn^{rs}, Ψ_pr^{tu}.
            for mm in 0..dk {
                for n in 0..dj {
                    let x1 = entry(m, &vj, &vk, j, k, mm, n)?;
                    if x1.is_zero() {
                        continue;
                    }
                    out.add_term(vec![a, bk[mm], bj[n]], x1.clone());
                    for p in 0..dk {
                        for q in 0..di {
                            let x2 = entry(m, &vi, &vk, i, mm, p, q)?;
                            if x2.is_zero() {
                                continue;
                            }
                            let x12 = x1 * x2;
                            for r in 0..dj {
                                for s in 0..di {
                                    let x3 = entry(m, &vi, &vj, q, n, r, s)?;
                                    if x3.is_zero() {
                                        continue;
                                    }
                                    let x123 = &x12 * x3;
                                    out.add_term(vec![bk[p], bj[r], bi[s]], &x123 * &t);
                                    for tt in 0..dj {
                                        for u in 0..dk {
                                            let x4 = entry(m, &vk, &vj, p, r, tt, u)?;
                                            if !x4.is_zero() {
                                                out.add_term(vec![bj[tt], bk[u], bi[s]], &(&x123 * x4) * &t);
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The bracket as a signed sum of three-strand braid composites, for any braiding.
pub fn composite_bracket(variant: BracketVariant, psi: &Braiding, a: &Element, b: &Element, c: &Element) -> Result<Element> {
    let spec = a.spec();
    let t = variant.tail_sign();
    let presets = match variant.side {
        Side::Left => [Preset::LeftIdentity, Preset::LeftSwap, Preset::LeftFullTwist, Preset::LeftReverse],
        Side::Right => [Preset::RightIdentity, Preset::RightSwap, Preset::RightFullTwist, Preset::RightReverse],
    };
    let mut out = Element::zero(spec);
    for (wa, ca) in a.terms() {
        for (wb, cb) in b.terms() {
            for (wc, cc) in c.terms() {
                let coeff = &(ca * cb) * cc;
                let x = Element::monomial(spec, cat(&[wa, wb, wc]), coeff);
                let lens = [wa.len(), wb.len(), wc.len()];
                for (idx, p) in presets.iter().enumerate() {
                    let y = p.operator().apply_blocks(psi, &x, &lens)?;
                    let k = if idx < 2 { Scalar::one() } else { t.clone() };
                    out.axpy(&k, &y)?;
                }
            }
        }
    }
    Ok(out)
}

/// ⟨a, b, c⟩ for homogeneous elements, extended multilinearly.
///
/// Diagonal braidings use the phase formula; matrix braidings use the explicit
/// index contraction on generators and braid composites on longer words.
pub fn ternary_bracket(variant: BracketVariant, psi: &Braiding, a: &Element, b: &Element, c: &Element) -> Result<Element> {
    for x in [a, b, c] {
        x.homogeneous_grade()?;
    }
    let spec = a.spec();
    if b.spec().fingerprint() != spec.fingerprint() || c.spec().fingerprint() != spec.fingerprint() {
        return Err(Error::SpecMismatch);
    }
    match psi {
        Braiding::Diagonal(d) => {
            let mut out = Element::zero(spec);
            for (wa, ca) in a.terms() {
                for (wb, cb) in b.terms() {
                    for (wc, cc) in c.terms() {
                        let coeff = &(ca * cb) * cc;
                        diagonal_word_bracket(variant, d, spec, wa, wb, wc, &coeff, &mut out);
                    }
                }
            }
            Ok(out)
        }
        Braiding::Matrix(m) => {
            let letters = |x: &Element| x.terms().keys().all(|w| w.len() == 1);
            if !(letters(a) && letters(b) && letters(c)) {
                return composite_bracket(variant, psi, a, b, c);
            }
            let mut out = Element::zero(spec);
            for (wa, ca) in a.terms() {
                for (wb, cb) in b.terms() {
                    for (wc, cc) in c.terms() {
                        let coeff = &(ca * cb) * cc;
                        let y = matrix_contraction(variant, m, spec, wa[0], wb[0], wc[0])?;
                        out.axpy(&coeff, &y)?;
                    }
                }
            }
            Ok(out)
        }
    }
}

/// The bracket of an algebra over a braiding, as a [`TernaryBracket`].
pub struct FreeBracket<'a> {
    pub variant: BracketVariant,
    pub braiding: &'a Braiding,
}

impl TernaryBracket for FreeBracket<'_> {
    fn side(&self) -> Side {
        self.variant.side
    }

    fn bracket(&self, a: &Element, b: &Element, c: &Element) -> Result<Element> {
        ternary_bracket(self.variant, self.braiding, a, b, c)
    }

    fn phase(&self, x: &Element, y: &Element) -> Result<Scalar> {
        element_phase(require_diagonal(self.braiding)?, x, y)
    }
}

/// xy + phase_of(|x|, |y|)·yx. With ε = -1, n = 2 this is xy - (-1)^σ yx; with ε = +1 it is xy + ζ_n^σ yx.
pub fn deformed_binary_bracket(conv: PhaseConvention, form: &SigmaForm, x: &Element, y: &Element) -> Result<Element> {
    let gx = x.homogeneous_grade()?;
    let gy = y.homogeneous_grade()?;
    let p = phase_of(conv, form, &gx, &gy)?;
    let xy = x.concat(y)?;
    let yx = y.concat(x)?;
    let mut out = xy;
    out.axpy(&p, &yx)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    L,
    R,
}

/// L_{a,b}(c) = ⟨a, b, c⟩₁ and R_{y,z}(x) = ⟨x, y, z⟩₂.
pub struct MultiplicationOperator<'a> {
    pub kind: OperatorKind,
    pub first: Element,
    pub second: Element,
    pub bracket: &'a dyn TernaryBracket,
}

impl MultiplicationOperator<'_> {
    pub fn apply(&self, x: &Element) -> Result<Element> {
        match self.kind {
            OperatorKind::L => self.bracket.bracket(&self.first, &self.second, x),
            OperatorKind::R => self.bracket.bracket(x, &self.first, &self.second),
        }
    }
}

// Residuals: each is LHS - RHS of one identity.

/// ⟨a,b,c⟩₁ - s_ij⟨b,a,c⟩₁ or ⟨a,b,c⟩₂ - s_jk⟨a,c,b⟩₂.
pub fn symmetry_residual(br: &dyn TernaryBracket, a: &Element, b: &Element, c: &Element) -> Result<Element> {
    let lhs = br.bracket(a, b, c)?;
    match br.side() {
        Side::Left => lhs.sub(&br.bracket(b, a, c)?.scale(&br.phase(a, b)?)),
        Side::Right => lhs.sub(&br.bracket(a, c, b)?.scale(&br.phase(b, c)?)),
    }
}

/// s_ik⟨a,b,c⟩ + s_ij⟨b,c,a⟩ + s_jk⟨c,a,b⟩.
pub fn cyclic_residual(br: &dyn TernaryBracket, a: &Element, b: &Element, c: &Element) -> Result<Element> {
    let mut out = br.bracket(a, b, c)?.scale(&br.phase(a, c)?);
    out.axpy(&br.phase(a, b)?, &br.bracket(b, c, a)?)?;
    out.axpy(&br.phase(b, c)?, &br.bracket(c, a, b)?)?;
    Ok(out)
}

fn p2(br: &dyn TernaryBracket, xs: &[&Element], ys: &[&Element]) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for x in xs {
        for y in ys {
            acc = &acc * &br.phase(x, y)?;
        }
    }
    Ok(acc)
}

/// ⟨a,b,cd⟩₁ = ⟨a,b,c⟩₁d + s(ab,c) c⟨a,b,d⟩₁.
pub fn left_leibniz_residual(br: &dyn TernaryBracket, a: &Element, b: &Element, c: &Element, d: &Element) -> Result<Element> {
    let lhs = br.bracket(a, b, &c.concat(d)?)?;
    let mut rhs = br.bracket(a, b, c)?.concat(d)?;
    rhs.axpy(&p2(br, &[a, b], &[c])?, &c.concat(&br.bracket(a, b, d)?)?)?;
    lhs.sub(&rhs)
}

/// ⟨a,b,cde⟩₁ = ⟨a,b,c⟩₁de + s(ab,c) c⟨a,b,d⟩₁e + s(ab,cd) cd⟨a,b,e⟩₁.
pub fn left_leibniz3_residual(
    br: &dyn TernaryBracket,
    a: &Element,
    b: &Element,
    c: &Element,
    d: &Element,
    e: &Element,
) -> Result<Element> {
    let lhs = br.bracket(a, b, &Element::concat_all(&[c, d, e])?)?;
    let mut rhs = Element::concat_all(&[&br.bracket(a, b, c)?, d, e])?;
    rhs.axpy(&p2(br, &[a, b], &[c])?, &Element::concat_all(&[c, &br.bracket(a, b, d)?, e])?)?;
    rhs.axpy(&p2(br, &[a, b], &[c, d])?, &Element::concat_all(&[c, d, &br.bracket(a, b, e)?])?)?;
    lhs.sub(&rhs)
}

/// ⟨ab,c,d⟩₂ = a⟨b,c,d⟩₂ + s(cd,b) ⟨a,c,d⟩₂b, with the exponent as written.
pub fn right_leibniz_residual(br: &dyn TernaryBracket, a: &Element, b: &Element, c: &Element, d: &Element) -> Result<Element> {
    let lhs = br.bracket(&a.concat(b)?, c, d)?;
    let mut rhs = a.concat(&br.bracket(b, c, d)?)?;
    rhs.axpy(&p2(br, &[c, d], &[b])?, &br.bracket(a, c, d)?.concat(b)?)?;
    lhs.sub(&rhs)
}

/// ⟨abc,d,e⟩₂ = ab⟨c,d,e⟩₂ + s(c,de) a⟨b,d,e⟩₂c + s(bc,de) ⟨a,d,e⟩₂bc.
pub fn right_leibniz3_residual(
    br: &dyn TernaryBracket,
    a: &Element,
    b: &Element,
    c: &Element,
    d: &Element,
    e: &Element,
) -> Result<Element> {
    let lhs = br.bracket(&Element::concat_all(&[a, b, c])?, d, e)?;
    let mut rhs = Element::concat_all(&[a, b, &br.bracket(c, d, e)?])?;
    rhs.axpy(&p2(br, &[c], &[d, e])?, &Element::concat_all(&[a, &br.bracket(b, d, e)?, c])?)?;
    rhs.axpy(&p2(br, &[b, c], &[d, e])?, &Element::concat_all(&[&br.bracket(a, d, e)?, b, c])?)?;
    lhs.sub(&rhs)
}

/// Both sides of the left Jacobi identity, computed directly.
pub fn jacobi_left_sides(
    br: &dyn TernaryBracket,
    a: &Element,
    b: &Element,
    c: &Element,
    d: &Element,
    e: &Element,
) -> Result<(Element, Element)> {
    let inner = |x: Element| -> Result<Element> { closed(br, x) };
    let lhs = br.bracket(a, b, &inner(br.bracket(c, d, e)?)?)?;
    let mut rhs = br.bracket(&inner(br.bracket(a, b, c)?)?, d, e)?;
    let s1 = p2(br, &[a, b], &[c])?;
    rhs.axpy(&s1, &br.bracket(c, &inner(br.bracket(a, b, d)?)?, e)?)?;
    let s2 = &s1 * &p2(br, &[a, b], &[d])?;
    rhs.axpy(&s2, &br.bracket(c, d, &inner(br.bracket(a, b, e)?)?)?)?;
    Ok((lhs, rhs))
}

/// Both sides of the left Jacobi identity written with L_{a,b} as a derivation.
pub fn jacobi_left_operator_sides(
    br: &dyn TernaryBracket,
    a: &Element,
    b: &Element,
    c: &Element,
    d: &Element,
    e: &Element,
) -> Result<(Element, Element)> {
    let l = MultiplicationOperator {
        kind: OperatorKind::L,
        first: a.clone(),
        second: b.clone(),
        bracket: br,
    };
    let lc = |x: &Element| -> Result<Element> { closed(br, l.apply(x)?) };
    let lhs = l.apply(&closed(br, br.bracket(c, d, e)?)?)?;
    let mut rhs = br.bracket(&lc(c)?, d, e)?;
    let s1 = p2(br, &[a, b], &[c])?;
    rhs.axpy(&s1, &br.bracket(c, &lc(d)?, e)?)?;
    let s2 = &s1 * &p2(br, &[a, b], &[d])?;
    rhs.axpy(&s2, &br.bracket(c, d, &lc(e)?)?)?;
    Ok((lhs, rhs))
}

/// Both sides of the right Jacobi identity, with the middle exponent read as σ(v_k, v_l + v_m).
pub fn jacobi_right_sides(
    br: &dyn TernaryBracket,
    a: &Element,
    b: &Element,
    c: &Element,
    d: &Element,
    e: &Element,
) -> Result<(Element, Element)> {
    let inner = |x: Element| -> Result<Element> { closed(br, x) };
    let lhs = br.bracket(&inner(br.bracket(a, b, c)?)?, d, e)?;
    let mut rhs = br.bracket(a, b, &inner(br.bracket(c, d, e)?)?)?;
    rhs.axpy(&p2(br, &[c], &[d, e])?, &br.bracket(a, &inner(br.bracket(b, d, e)?)?, c)?)?;
    rhs.axpy(&p2(br, &[b, c], &[d, e])?, &br.bracket(&inner(br.bracket(a, d, e)?)?, b, c)?)?;
    Ok((lhs, rhs))
}

/// Both sides of the right Jacobi identity written with R_{d,e}.
pub fn jacobi_right_operator_sides(
    br: &dyn TernaryBracket,
    a: &Element,
    b: &Element,
    c: &Element,
    d: &Element,
    e: &Element,
) -> Result<(Element, Element)> {
    let r = MultiplicationOperator {
        kind: OperatorKind::R,
        first: d.clone(),
        second: e.clone(),
        bracket: br,
    };
    let rc = |x: &Element| -> Result<Element> { closed(br, r.apply(x)?) };
    let lhs = r.apply(&closed(br, br.bracket(a, b, c)?)?)?;
    let mut rhs = br.bracket(a, b, &rc(c)?)?;
    rhs.axpy(&p2(br, &[c], &[d, e])?, &br.bracket(a, &rc(b)?, c)?)?;
    rhs.axpy(&p2(br, &[b, c], &[d, e])?, &br.bracket(&rc(a)?, b, c)?)?;
    Ok((lhs, rhs))
}

fn closed(br: &dyn TernaryBracket, x: Element) -> Result<Element> {
    if br.closed_in_span() && x.terms().keys().any(|w| w.len() != 1) {
        return Err(Error::NotClosed(x.render()));
    }
    Ok(x)
}

/// Every tuple of the given length over `grades`, lexicographic.
pub fn grade_tuples(grades: &[Grade], len: usize) -> Vec<Vec<Grade>> {
    let mut out: Vec<Vec<Grade>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                grades.iter().map(move |g| {
                    let mut n = t.clone();
                    n.push(g.clone());
                    n
                })
            })
            .collect();
    }
    out
}

fn probe_elements(psi: &Braiding, grades: &[Grade]) -> Result<Vec<Element>> {
    let spec = positional_probe(psi.group(), grades)?;
    (0..grades.len())
        .map(|i| Element::generator(&spec, &format!("x{}", i + 1)))
        .collect()
}

fn grade_subject(gs: &[Grade]) -> String {
    subject(&gs.iter().collect::<Vec<_>>())
}

type Residual = fn(&dyn TernaryBracket, &[Element]) -> Result<Element>;

fn sweep(check: &str, psi: &Braiding, variant: BracketVariant, tuples: &[Vec<Grade>], f: Residual) -> Result<Report> {
    require_diagonal(psi)?;
    let br = FreeBracket { variant, braiding: psi };
    let verdicts = tuples
        .par_iter()
        .map(|gs| {
            let xs = probe_elements(psi, gs)?;
            let r = f(&br, &xs)?;
            Ok(Verdict::from_residual(check, grade_subject(gs), r.render()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::from_verdicts(verdicts))
}

/// Braided symmetry in the first (left) or last (right) pair, on probe generators for each grade triple.
pub fn check_symmetry(variant: BracketVariant, psi: &Braiding, triples: &[Vec<Grade>]) -> Result<Report> {
    sweep(
        &format!("ternary.symmetry.{variant}"),
        psi,
        variant,
        triples,
        |br, x| symmetry_residual(br, &x[0], &x[1], &x[2]),
    )
}

/// Cyclic relation on probe generators for each grade triple.
pub fn check_cyclic(variant: BracketVariant, psi: &Braiding, triples: &[Vec<Grade>]) -> Result<Report> {
    sweep(
        &format!("ternary.cyclic.{variant}"),
        psi,
        variant,
        triples,
        |br, x| cyclic_residual(br, &x[0], &x[1], &x[2]),
    )
}

fn jacobi_operator_residual(
    sides: fn(&dyn TernaryBracket, &Element, &Element, &Element, &Element, &Element) -> Result<(Element, Element)>,
    direct: fn(&dyn TernaryBracket, &Element, &Element, &Element, &Element, &Element) -> Result<(Element, Element)>,
    br: &dyn TernaryBracket,
    x: &[Element],
) -> Result<Element> {
    let (l, r) = sides(br, &x[0], &x[1], &x[2], &x[3], &x[4])?;
    let (dl, dr) = direct(br, &x[0], &x[1], &x[2], &x[3], &x[4])?;
    if l != dl || r != dr {
        return Err(Error::Shape("operator route and direct route disagree".into()));
    }
    l.sub(&r)
}

/// Derivation identities on 4-tuples (word in one slot of length 2) and 5-tuples (length 3, and the
/// L/R operator product rules). Left identities use the left bracket of `signs`,
/// right identities the right one.
pub fn check_derivation(signs: Signs, psi: &Braiding, quads: &[Vec<Grade>], quints: &[Vec<Grade>]) -> Result<Report> {
    let left = BracketVariant::new(Side::Left, signs);
    let right = BracketVariant::new(Side::Right, signs);
    let mut r = sweep(&format!("ternary.derivation.left-cd.{signs}"), psi, left, quads, |br, x| {
        left_leibniz_residual(br, &x[0], &x[1], &x[2], &x[3])
    })?;
    r.extend(sweep(&format!("ternary.derivation.right-ab.{signs}"), psi, right, quads, |br, x| {
        right_leibniz_residual(br, &x[0], &x[1], &x[2], &x[3])
    })?);
    r.extend(sweep(&format!("ternary.derivation.left-cde.{signs}"), psi, left, quints, |br, x| {
        left_leibniz3_residual(br, &x[0], &x[1], &x[2], &x[3], &x[4])
    })?);
    r.extend(sweep(&format!("ternary.derivation.right-abc.{signs}"), psi, right, quints, |br, x| {
        right_leibniz3_residual(br, &x[0], &x[1], &x[2], &x[3], &x[4])
    })?);
    r.extend(sweep(&format!("ternary.derivation.left-operator.{signs}"), psi, left, quints, |br, x| {
        jacobi_operator_residual(jacobi_left_operator_sides, jacobi_left_sides, br, x)
    })?);
    r.extend(sweep(&format!("ternary.derivation.right-operator.{signs}"), psi, right, quints, |br, x| {
        jacobi_operator_residual(jacobi_right_operator_sides, jacobi_right_sides, br, x)
    })?);
    Ok(r)
}

/// Jacobi identity of a bracket over every 5-tuple of the given generators.
/// The L (left) or R (right) operator route must give term-for-term the same sides.
pub fn check_jacobi(br: &dyn TernaryBracket, gens: &[Element]) -> Result<Report> {
    let n = gens.len();
    let total = n.pow(5);
    let (check, note) = match br.side() {
        Side::Left => ("ternary.jacobi.left", None),
        Side::Right => (
            "ternary.jacobi.right",
            Some("middle exponent read as sigma(v_k, v_l + v_m)"),
        ),
    };
    let verdicts = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut t = [0usize; 5];
            for slot in t.iter_mut().rev() {
                *slot = idx % n;
                idx /= n;
            }
            let x: Vec<&Element> = t.iter().map(|&i| &gens[i]).collect();
            let subject = x.iter().map(|e| e.render()).collect::<Vec<_>>().join(",");
            let (direct, op): (fn(_, _, _, _, _, _) -> _, fn(_, _, _, _, _, _) -> _) = match br.side() {
                Side::Left => (jacobi_left_sides, jacobi_left_operator_sides),
                Side::Right => (jacobi_right_sides, jacobi_right_operator_sides),
            };
            let (l, r) = direct(br, x[0], x[1], x[2], x[3], x[4]).map_err(|e| with_tuple(e, &subject))?;
            let (ol, or) = op(br, x[0], x[1], x[2], x[3], x[4]).map_err(|e| with_tuple(e, &subject))?;
            let mut v = Verdict::from_residual(check, subject.clone(), l.sub(&r)?.render());
            if ol != l || or != r {
                v = Verdict::fail(check, subject, "operator route differs from direct route");
            }
            if let Some(n) = note {
                v = v.with_note(n);
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::from_verdicts(verdicts))
}

fn with_tuple(e: Error, subject: &str) -> Error {
    match e {
        Error::NotClosed(out) => Error::NotClosed(format!("{subject} -> {out}")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::GradeGroup;

    fn diag(eps: i64, n: u32, m: Vec<Vec<i64>>) -> Braiding {
        Braiding::diagonal(PhaseConvention::new(eps, n).unwrap(), SigmaForm::new(n, m).unwrap()).unwrap()
    }

    fn probe3(psi: &Braiding, g: [&[i64]; 3]) -> (Arc<AlgebraSpec>, [Element; 3]) {
        let group = psi.group();
        let gs: Vec<Grade> = g.iter().map(|r| group.grade(r).unwrap()).collect();
        let xs = probe_elements(psi, &gs).unwrap();
        (xs[0].spec().clone(), [xs[0].clone(), xs[1].clone(), xs[2].clone()])
    }

    fn words(spec: &Arc<AlgebraSpec>, terms: &[(i64, &str)]) -> Element {
        let mut e = Element::zero(spec);
        for (c, w) in terms {
            let ids: Vec<&str> = w.split('.').collect();
            e.add_term(spec.parse_word(&ids).unwrap(), Scalar::int(*c));
        }
        e
    }

    #[test]
    fn bracket_examples() {
        let zero = diag(1, 2, vec![vec![0, 0], vec![0, 0]]);
        let (s, [a, b, c]) = probe3(&zero, [&[1, 0], &[0, 1], &[1, 1]]);
        let sym = ternary_bracket(BracketVariant::LEFT_SYM, &zero, &a, &b, &c).unwrap();
        assert_eq!(
            sym,
            words(&s, &[(1, "x1.x2.x3"), (1, "x2.x1.x3"), (1, "x3.x1.x2"), (1, "x3.x2.x1")])
        );
        let id = diag(1, 2, vec![vec![1, 0], vec![0, 1]]);
        let (s, [a, b, c]) = probe3(&id, [&[1, 0], &[1, 0], &[1, 0]]);
        let alt = ternary_bracket(BracketVariant::LEFT_ALT, &id, &a, &b, &c).unwrap();
        assert_eq!(
            alt,
            words(&s, &[(1, "x1.x2.x3"), (-1, "x2.x1.x3"), (-1, "x3.x1.x2"), (1, "x3.x2.x1")])
        );
        let mixed = a.add(&c.concat(&b).unwrap()).unwrap();
        assert!(matches!(
            ternary_bracket(BracketVariant::LEFT_ALT, &id, &mixed, &b, &c),
            Err(Error::Inhomogeneous(_))
        ));
    }

    #[test]
    fn alt_left_is_graded_commutator() {
        for m in SigmaForm::enumerate(GradeGroup::new(2, 2).unwrap()) {
            for eps in [1, -1] {
                let psi = diag(eps, 2, m.matrix.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect());
                let d = psi.as_diagonal().unwrap();
                for gs in grade_tuples(&psi.grades(), 3) {
                    let x = probe_elements(&psi, &gs).unwrap();
                    let (a, b, c) = (&x[0], &x[1], &x[2]);
                    let mut xab = a.concat(b).unwrap();
                    xab.axpy(&element_phase(d, a, b).unwrap(), &b.concat(a).unwrap()).unwrap();
                    let mut comm = xab.concat(c).unwrap();
                    let p = element_phase(d, &a.concat(b).unwrap(), c).unwrap();
                    comm.axpy(&-&p, &c.concat(&xab).unwrap()).unwrap();
                    assert_eq!(ternary_bracket(BracketVariant::LEFT_ALT, &psi, a, b, c).unwrap(), comm);
                }
            }
        }
    }

    #[test]
    fn composite_matches_phase_formula_when_unitary() {
        let g = GradeGroup::new(2, 2).unwrap();
        for m in SigmaForm::enumerate(g) {
            let unitary = m.is_symmetric();
            let psi = Braiding::diagonal(PhaseConvention::plus(2), m).unwrap();
            let mut all_equal = true;
            for gs in grade_tuples(&psi.grades(), 3) {
                let x = probe_elements(&psi, &gs).unwrap();
                for v in BracketVariant::ALL {
                    let f = ternary_bracket(v, &psi, &x[0], &x[1], &x[2]).unwrap();
                    let c = composite_bracket(v, &psi, &x[0], &x[1], &x[2]).unwrap();
                    all_equal &= f == c;
                }
            }
            assert_eq!(all_equal, unitary);
        }
    }

    #[test]
    fn contraction_matches_composite_on_jimbo() {
        let g = GradeGroup::new(2, 1).unwrap();
        let e = g.zero();
        let i = |x: i64| Scalar::int(x);
        let r = vec![
            vec![i(2), i(0), i(0), i(0)],
            vec![i(0), i(0), i(1), i(0)],
            vec![i(0), i(1), Scalar::from(crate::Rat::new(3, 2).unwrap()), i(0)],
            vec![i(0), i(0), i(0), i(2)],
        ];
        let psi = Braiding::matrix(g, [(e.clone(), 2)].into(), vec![((e.clone(), e), r)]).unwrap();
        let spec = psi.basis_spec();
        let gens: Vec<Element> = spec
            .generators()
            .iter()
            .map(|x| Element::generator(&spec, &x.id).unwrap())
            .collect();
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    for v in BracketVariant::ALL {
                        assert_eq!(
                            ternary_bracket(v, &psi, a, b, c).unwrap(),
                            composite_bracket(v, &psi, a, b, c).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn symmetry_and_cyclic_examples() {
        let id = diag(1, 2, vec![vec![1, 0], vec![0, 1]]);
        let triples = grade_tuples(&id.grades(), 3);
        assert_eq!(triples.len(), 64);
        for v in BracketVariant::ALL {
            assert!(check_symmetry(v, &id, &triples).unwrap().all_pass(), "{v}");
        }
        assert!(check_cyclic(BracketVariant::LEFT_ALT, &id, &triples).unwrap().all_pass());
        assert!(check_cyclic(BracketVariant::RIGHT_ALT, &id, &triples).unwrap().all_pass());
        let zero = diag(1, 2, vec![vec![0, 0], vec![0, 0]]);
        let (s, [a, b, c]) = probe3(&zero, [&[0, 0], &[0, 0], &[0, 0]]);
        let br = FreeBracket {
            variant: BracketVariant::LEFT_SYM,
            braiding: &zero,
        };
        let r = cyclic_residual(&br, &a, &b, &c).unwrap();
        let all6 = words(
            &s,
            &[
                (2, "x1.x2.x3"),
                (2, "x1.x3.x2"),
                (2, "x2.x1.x3"),
                (2, "x2.x3.x1"),
                (2, "x3.x1.x2"),
                (2, "x3.x2.x1"),
            ],
        );
        assert_eq!(r, all6);
    }

    #[test]
    fn derivation_on_small_sweep() {
        let id = diag(1, 2, vec![vec![1, 0], vec![0, 1]]);
        let grades = vec![Grade(vec![1, 0]), Grade(vec![1, 1])];
        let r = check_derivation(Signs::Alt, &id, &grade_tuples(&grades, 4), &grade_tuples(&grades, 5)).unwrap();
        assert!(r.all_pass(), "{}", r.to_text());
        let zero = diag(1, 2, vec![vec![0, 0], vec![0, 0]]);
        let r = check_derivation(Signs::Alt, &zero, &grade_tuples(&grades, 4), &[]).unwrap();
        assert!(r.all_pass());
    }

    #[test]
    fn deformed_binary_examples() {
        let g = GradeGroup::new(2, 1).unwrap();
        let spec = positional_probe(g, &[g.grade(&[1]).unwrap(), g.grade(&[1]).unwrap(), g.zero()]).unwrap();
        let x = Element::generator(&spec, "x1").unwrap();
        let y = Element::generator(&spec, "x2").unwrap();
        let z = Element::generator(&spec, "x3").unwrap();
        let form = SigmaForm::new(2, vec![vec![1]]).unwrap();
        let comm = |p: &Element, q: &Element| p.concat(q).unwrap().sub(&q.concat(p).unwrap()).unwrap();
        let anti = |p: &Element, q: &Element| p.concat(q).unwrap().add(&q.concat(p).unwrap()).unwrap();
        let minus = PhaseConvention::new(-1, 2).unwrap();
        let plus = PhaseConvention::plus(2);
        assert_eq!(deformed_binary_bracket(minus, &form, &x, &z).unwrap(), comm(&x, &z));
        assert_eq!(deformed_binary_bracket(minus, &form, &x, &y).unwrap(), anti(&x, &y));
        assert_eq!(deformed_binary_bracket(plus, &form, &x, &y).unwrap(), comm(&x, &y));
        assert_eq!(deformed_binary_bracket(plus, &form, &x, &z).unwrap(), anti(&x, &z));
    }
}
