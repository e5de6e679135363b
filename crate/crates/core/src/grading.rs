//! Grading group Γ = (Z_n)^k, the bilinear form σ and braiding phases.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactscalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradeGroup {
    pub modulus: u32,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Grade(pub Vec<u32>);

impl GradeGroup {
    pub fn new(modulus: u32, rank: usize) -> Result<GradeGroup> {
        if modulus == 0 || rank == 0 {
            return Err(Error::Shape(format!(
                "grade group needs n >= 1 and k >= 1 (got n = {modulus}, k = {rank})"
            )));
        }
        Ok(GradeGroup { modulus, rank })
    }

    pub fn zero(&self) -> Grade {
        Grade(vec![0; self.rank])
    }

    /// Validate raw residues. Values outside `[0, n)` are rejected, not reduced.
    pub fn grade(&self, residues: &[i64]) -> Result<Grade> {
        let ok = residues.len() == self.rank
            && residues.iter().all(|&r| r >= 0 && r < self.modulus as i64);
        if !ok {
            return Err(Error::InvalidGrade {
                grade: residues.to_vec(),
                modulus: self.modulus,
                rank: self.rank,
            });
        }
        Ok(Grade(residues.iter().map(|&r| r as u32).collect()))
    }

    pub fn contains(&self, g: &Grade) -> bool {
        g.0.len() == self.rank && g.0.iter().all(|&r| r < self.modulus)
    }

    pub fn add(&self, a: &Grade, b: &Grade) -> Grade {
        Grade(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| (x + y) % self.modulus)
                .collect(),
        )
    }

    /// Mixed-radix position of a grade in [`GradeGroup::elements`].
    pub fn index(&self, g: &Grade) -> usize {
        g.0.iter().fold(0, |acc, &r| acc * self.modulus as usize + r as usize)
    }

    pub fn order(&self) -> usize {
        (self.modulus as usize).pow(self.rank as u32)
    }

    /// All elements, lexicographic.
    pub fn elements(&self) -> Vec<Grade> {
        let mut out = Vec::with_capacity(self.order());
        let mut cur = vec![0u32; self.rank];
        loop {
            out.push(Grade(cur.clone()));
            let mut i = self.rank;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.modulus {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str(")")
    }
}

/// σ(v, w) = vᵀ M w mod n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SigmaForm {
    pub modulus: u32,
    pub matrix: Vec<Vec<u32>>,
}

impl SigmaForm {
    pub fn new(modulus: u32, matrix: Vec<Vec<i64>>) -> Result<SigmaForm> {
        let k = matrix.len();
        if modulus == 0 || k == 0 || matrix.iter().any(|row| row.len() != k) {
            return Err(Error::Shape("sigma form must be a non-empty square matrix".into()));
        }
        if let Some(bad) = matrix.iter().flatten().find(|&&x| x < 0 || x >= modulus as i64) {
            return Err(Error::Shape(format!("entry {bad} is not a residue mod {modulus}")));
        }
        let matrix = matrix
            .into_iter()
            .map(|row| row.into_iter().map(|x| x as u32).collect())
            .collect();
        Ok(SigmaForm { modulus, matrix })
    }

    pub fn zero(group: GradeGroup) -> SigmaForm {
        SigmaForm {
            modulus: group.modulus,
            matrix: vec![vec![0; group.rank]; group.rank],
        }
    }

    pub fn identity(group: GradeGroup) -> SigmaForm {
        let mut f = SigmaForm::zero(group);
        for i in 0..group.rank {
            f.matrix[i][i] = 1 % group.modulus;
        }
        f
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn group(&self) -> GradeGroup {
        GradeGroup {
            modulus: self.modulus,
            rank: self.rank(),
        }
    }

    pub fn sigma(&self, v: &Grade, w: &Grade) -> Result<u32> {
        let k = self.rank();
        if v.0.len() != k || w.0.len() != k {
            return Err(Error::Shape(format!(
                "grades {v} and {w} do not match a {k}x{k} form"
            )));
        }
        Ok(self.sigma_unchecked(v, w))
    }

    pub(crate) fn sigma_unchecked(&self, v: &Grade, w: &Grade) -> u32 {
        let n = self.modulus as u64;
        let mut acc = 0u64;
        for (i, &vi) in v.0.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (j, &wj) in w.0.iter().enumerate() {
                acc += vi as u64 * self.matrix[i][j] as u64 * wj as u64;
            }
        }
        (acc % n) as u32
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.rank();
        (0..k).all(|i| (0..k).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    /// Every matrix over Z_n of the given rank, lexicographic by row-major entries.
    pub fn enumerate(group: GradeGroup) -> Vec<SigmaForm> {
        let k = group.rank;
        let total = (group.modulus as usize).pow((k * k) as u32);
        (0..total)
            .map(|mut idx| {
                let mut entries = vec![0u32; k * k];
                for e in entries.iter_mut().rev() {
                    *e = (idx % group.modulus as usize) as u32;
                    idx /= group.modulus as usize;
                }
                SigmaForm {
                    modulus: group.modulus,
                    matrix: entries.chunks(k).map(<[u32]>::to_vec).collect(),
                }
            })
            .collect()
    }
}

impl fmt::Display for SigmaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.matrix.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "] mod {}", self.modulus)
    }
}

/// Braiding phase ε·ζ_n^σ(v,w).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseConvention {
    pub epsilon: i8,
    pub modulus: u32,
}

impl PhaseConvention {
    pub fn new(epsilon: i64, modulus: u32) -> Result<PhaseConvention> {
        match epsilon {
            1 | -1 => Ok(PhaseConvention {
                epsilon: epsilon as i8,
                modulus,
            }),
            e => Err(Error::InvalidEpsilon(e)),
        }
    }

    /// The default sign convention ε = +1.
    pub fn plus(modulus: u32) -> PhaseConvention {
        PhaseConvention {
            epsilon: 1,
            modulus,
        }
    }

    pub fn phase_for_sigma(&self, sigma: u32) -> Scalar {
        let z = Scalar::phase(sigma as i64, self.modulus).expect("modulus validated at construction");
        if self.epsilon < 0 {
            -z
        } else {
            z
        }
    }
}

pub fn phase_of(conv: PhaseConvention, form: &SigmaForm, v: &Grade, w: &Grade) -> Result<Scalar> {
    if conv.modulus != form.modulus {
        return Err(Error::Shape(format!(
            "convention modulus {} differs from form modulus {}",
            conv.modulus, form.modulus
        )));
    }
    Ok(conv.phase_for_sigma(form.sigma(v, w)?))
}

/// Literal class lists of the four Z₂ × Z₂ equivalence classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Z2FormClass {
    ColorSuperalgebra,
    LieSuperalgebra,
    ColorAlgebra,
    LieAlgebra,
    Unlisted,
}

impl Z2FormClass {
    pub fn label(&self) -> &'static str {
        match self {
            Z2FormClass::ColorSuperalgebra => "color-superalgebra-C(2,s)",
            Z2FormClass::LieSuperalgebra => "Lie-superalgebra-C(1,s)",
            Z2FormClass::ColorAlgebra => "color-algebra-C(2,a)",
            Z2FormClass::LieAlgebra => "Lie-algebra",
            Z2FormClass::Unlisted => "unlisted",
        }
    }
}

const COLOR_SUPER: [[[u32; 2]; 2]; 3] = [[[1, 0], [0, 1]], [[1, 1], [1, 0]], [[0, 1], [1, 1]]];
const LIE_SUPER: [[[u32; 2]; 2]; 3] = [[[1, 0], [0, 0]], [[0, 0], [0, 1]], [[1, 1], [1, 1]]];
const COLOR: [[[u32; 2]; 2]; 1] = [[[0, 1], [1, 0]]];
const LIE: [[[u32; 2]; 2]; 1] = [[[0, 0], [0, 0]]];

pub fn classify_z2_form(form: &SigmaForm) -> Result<Z2FormClass> {
    if form.modulus != 2 || form.rank() != 2 {
        return Err(Error::UnsupportedClassification {
            modulus: form.modulus,
            rank: form.rank(),
        });
    }
    let m = [
        [form.matrix[0][0], form.matrix[0][1]],
        [form.matrix[1][0], form.matrix[1][1]],
    ];
    let class = if COLOR_SUPER.contains(&m) {
        Z2FormClass::ColorSuperalgebra
    } else if LIE_SUPER.contains(&m) {
        Z2FormClass::LieSuperalgebra
    } else if COLOR.contains(&m) {
        Z2FormClass::ColorAlgebra
    } else if LIE.contains(&m) {
        Z2FormClass::LieAlgebra
    } else {
        Z2FormClass::Unlisted
    };
    Ok(class)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z22() -> GradeGroup {
        GradeGroup::new(2, 2).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let g = z22();
        let id = SigmaForm::identity(g);
        let v = g.grade(&[1, 0]).unwrap();
        let w = g.grade(&[1, 1]).unwrap();
        assert_eq!(id.sigma(&v, &v).unwrap(), 1);
        assert_eq!(id.sigma(&w, &w).unwrap(), 0);
        assert_eq!(id.sigma(&v, &w).unwrap(), 1);
        let zero = SigmaForm::zero(g);
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(zero.sigma(&a, &b).unwrap(), 0);
            }
        }
        let bad = Grade(vec![1]);
        assert!(matches!(id.sigma(&bad, &v), Err(Error::Shape(_))));
    }

    #[test]
    fn grade_validation() {
        let g = z22();
        assert!(g.grade(&[2, 0]).is_err());
        assert!(g.grade(&[-1, 0]).is_err());
        assert!(g.grade(&[1]).is_err());
        assert_eq!(g.add(&Grade(vec![1, 0]), &Grade(vec![1, 1])), Grade(vec![0, 1]));
        let g3 = GradeGroup::new(3, 2).unwrap();
        for (i, e) in g3.elements().iter().enumerate() {
            assert_eq!(g3.index(e), i);
        }
    }

    #[test]
    fn bilinearity_exhaustive() {
        for n in 2..=3 {
            for k in 1..=2 {
                let g = GradeGroup::new(n, k).unwrap();
                let els = g.elements();
                for form in SigmaForm::enumerate(g) {
                    for v in &els {
                        for v2 in &els {
                            for w in &els {
                                let lhs = form.sigma(&g.add(v, v2), w).unwrap();
                                let rhs = (form.sigma(v, w).unwrap() + form.sigma(v2, w).unwrap()) % n;
                                assert_eq!(lhs, rhs);
                                let lhs = form.sigma(w, &g.add(v, v2)).unwrap();
                                let rhs = (form.sigma(w, v).unwrap() + form.sigma(w, v2).unwrap()) % n;
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn phase_examples() {
        let g = GradeGroup::new(2, 1).unwrap();
        let f = SigmaForm::new(2, vec![vec![1]]).unwrap();
        let one = g.grade(&[1]).unwrap();
        let zero = g.zero();
        let plus = PhaseConvention::new(1, 2).unwrap();
        let minus = PhaseConvention::new(-1, 2).unwrap();
        assert_eq!(phase_of(plus, &f, &one, &one).unwrap(), Scalar::int(-1));
        assert_eq!(phase_of(minus, &f, &zero, &one).unwrap(), Scalar::int(-1));
        let f3 = SigmaForm::new(3, vec![vec![1]]).unwrap();
        let g3 = GradeGroup::new(3, 1).unwrap();
        let one3 = g3.grade(&[1]).unwrap();
        assert_eq!(
            phase_of(PhaseConvention::plus(3), &f3, &one3, &one3).unwrap(),
            Scalar::phase(1, 3).unwrap()
        );
        assert!(PhaseConvention::new(2, 2).is_err());
    }

    #[test]
    fn double_phase_trivial_iff_antisymmetric() {
        for n in 2..=4 {
            for k in 1..=2 {
                let g = GradeGroup::new(n, k).unwrap();
                let els = g.elements();
                for form in SigmaForm::enumerate(g) {
                    for eps in [1, -1] {
                        let conv = PhaseConvention::new(eps, n).unwrap();
                        let all_one = els.iter().all(|v| {
                            els.iter().all(|w| {
                                (&phase_of(conv, &form, v, w).unwrap() * &phase_of(conv, &form, w, v).unwrap())
                                    .is_one()
                            })
                        });
                        let antisym = els.iter().all(|v| {
                            els.iter()
                                .all(|w| (form.sigma(v, w).unwrap() + form.sigma(w, v).unwrap()) % n == 0)
                        });
                        assert_eq!(all_one, antisym, "n={n} form={form} eps={eps}");
                    }
                }
            }
        }
    }

    #[test]
    fn classification() {
        let f = |m: [[i64; 2]; 2]| SigmaForm::new(2, m.iter().map(|r| r.to_vec()).collect()).unwrap();
        assert_eq!(classify_z2_form(&f([[1, 0], [0, 1]])).unwrap(), Z2FormClass::ColorSuperalgebra);
        assert_eq!(classify_z2_form(&f([[0, 1], [1, 0]])).unwrap(), Z2FormClass::ColorAlgebra);
        assert_eq!(classify_z2_form(&f([[0, 0], [0, 0]])).unwrap(), Z2FormClass::LieAlgebra);
        assert_eq!(classify_z2_form(&f([[1, 1], [1, 1]])).unwrap(), Z2FormClass::LieSuperalgebra);
        assert_eq!(classify_z2_form(&f([[0, 1], [0, 0]])).unwrap(), Z2FormClass::Unlisted);
        let f3 = SigmaForm::new(3, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            classify_z2_form(&f3),
            Err(Error::UnsupportedClassification { .. })
        ));
    }

    #[test]
    fn classification_partition() {
        let mut counts = std::collections::BTreeMap::new();
        for form in SigmaForm::enumerate(z22()) {
            let c = classify_z2_form(&form).unwrap();
            if c != Z2FormClass::Unlisted {
                // every listed class member is symmetric
                assert!(form.is_symmetric());
            }
            *counts.entry(c.label()).or_insert(0) += 1;
        }
        assert_eq!(counts["color-superalgebra-C(2,s)"], 3);
        assert_eq!(counts["Lie-superalgebra-C(1,s)"], 3);
        assert_eq!(counts["color-algebra-C(2,a)"], 1);
        assert_eq!(counts["Lie-algebra"], 1);
        assert_eq!(counts["unlisted"], 8);
    }
}
