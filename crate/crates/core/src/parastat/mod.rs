//! Quadratic-form realization of the ternary brackets, parastatistics relation
//! tables and a Green-ansatz matrix oracle.

mod green;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::braiding::Braiding;
use crate::error::{Error, Result};
use crate::exactscalar::Scalar;
use crate::freealg::{AlgebraSpec, Element, GenId, Generator, SpeciesTag};
use crate::grading::{phase_of, Grade, GradeGroup, PhaseConvention, SigmaForm};
use crate::report::{Report, Status, Verdict};
use crate::ternary::{ternary_bracket, BracketVariant, Side, Signs, TernaryBracket};

pub use green::{green_ansatz_check, green_cross_flip, GreenOptions};

/// A block of `modes` generators `name1..` of one grade, plus `name1+..` when `daggers`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Species {
    pub name: String,
    pub grade: Grade,
    pub modes: u32,
    pub daggers: bool,
}

impl Species {
    pub fn new(name: impl Into<String>, grade: Grade, modes: u32, daggers: bool) -> Species {
        Species {
            name: name.into(),
            grade,
            modes,
            daggers,
        }
    }
}

/// Q(left_i, right_j) = value·δ_ij. Each side is (species name, dagger).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QRule {
    pub left: (String, bool),
    pub right: (String, bool),
    pub value: Scalar,
}

impl QRule {
    pub fn delta(left: (&str, bool), right: (&str, bool), value: i64) -> QRule {
        QRule {
            left: (left.0.to_string(), left.1),
            right: (right.0.to_string(), right.1),
            value: Scalar::int(value),
        }
    }
}

/// Sparse pairing table on generators. Unlisted pairs are 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QForm {
    table: BTreeMap<(GenId, GenId), Scalar>,
    checked: bool,
}

impl QForm {
    /// Builds the table from explicit entries, filling each missing orientation with
    /// Q(b,a) = -s(|a|,|b|)⁻¹·Q(a,b). When `checked`, an explicit entry that disagrees
    /// with that rule is an error; otherwise it is kept as given.
    pub fn new(
        spec: &AlgebraSpec,
        conv: PhaseConvention,
        form: &SigmaForm,
        entries: &[((GenId, GenId), Scalar)],
        checked: bool,
    ) -> Result<QForm> {
        let mut explicit: BTreeMap<(GenId, GenId), Scalar> = BTreeMap::new();
        for ((a, b), v) in entries {
            if let Some(prev) = explicit.insert((*a, *b), v.clone()) {
                if &prev != v {
                    return Err(violation(spec, *a, *b));
                }
            }
        }
        let mut table = explicit.clone();
        for ((a, b), v) in &explicit {
            let s = phase_of(conv, form, spec.grade(*a), spec.grade(*b))?;
            let implied = -&(&s.inv()? * v);
            match explicit.get(&(*b, *a)) {
                Some(w) if *w != implied && checked => return Err(violation(spec, *a, *b)),
                Some(_) => {}
                None => {
                    if a == b && implied != *v && checked {
                        return Err(violation(spec, *a, *b));
                    }
                    table.insert((*b, *a), implied);
                }
            }
        }
        table.retain(|_, v| !v.is_zero());
        Ok(QForm { table, checked })
    }

    pub fn is_checked(&self) -> bool {
        self.checked
    }

    pub fn eval(&self, g: GenId, h: GenId) -> Scalar {
        self.table.get(&(g, h)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(GenId, GenId), &Scalar)> {
        self.table.iter()
    }
}

fn violation(spec: &AlgebraSpec, a: GenId, b: GenId) -> Error {
    Error::QFormViolation(spec.generator(a).id.clone(), spec.generator(b).id.clone())
}

/// An algebra generated by species blocks, with its σ-form and quadratic form.
#[derive(Debug, Clone)]
pub struct SpeciesSpec {
    algebra: Arc<AlgebraSpec>,
    species: Vec<Species>,
    conv: PhaseConvention,
    form: SigmaForm,
    q: QForm,
    braiding: Braiding,
}

impl SpeciesSpec {
    pub fn new(
        group: GradeGroup,
        form: SigmaForm,
        conv: PhaseConvention,
        species: Vec<Species>,
        rules: &[QRule],
        checked: bool,
    ) -> Result<SpeciesSpec> {
        let mut gens = Vec::new();
        for sp in &species {
            if !group.contains(&sp.grade) {
                return Err(Error::InvalidGrade {
                    grade: sp.grade.0.iter().map(|&x| x as i64).collect(),
                    modulus: group.modulus,
                    rank: group.rank,
                });
            }
            let daggers: &[bool] = if sp.daggers { &[false, true] } else { &[false] };
            for &dagger in daggers {
                for mode in 1..=sp.modes {
                    let id = format!("{}{}{}", sp.name, mode, if dagger { "+" } else { "" });
                    gens.push(Generator::new(id, sp.grade.clone()).with_species(SpeciesTag {
                        name: sp.name.clone(),
                        dagger,
                        mode,
                    }));
                }
            }
        }
        let algebra = AlgebraSpec::new(group, gens)?;
        let find = |name: &str, dagger: bool, mode: u32| -> Result<Option<GenId>> {
            let sp = species
                .iter()
                .find(|s| s.name == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            if dagger && !sp.daggers {
                return Err(Error::UnknownGenerator(format!("{name}+")));
            }
            if mode > sp.modes {
                return Ok(None);
            }
            let id = format!("{name}{mode}{}", if dagger { "+" } else { "" });
            algebra.lookup(&id).map(Some)
        };
        let mut entries = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for r in rules {
            if !seen.insert((r.left.clone(), r.right.clone())) {
                return Err(Error::QFormViolation(rule_id(&r.left), rule_id(&r.right)));
            }
            let modes = species.iter().map(|s| s.modes).max().unwrap_or(0);
            for i in 1..=modes {
                if let (Some(a), Some(b)) = (find(&r.left.0, r.left.1, i)?, find(&r.right.0, r.right.1, i)?) {
                    entries.push(((a, b), r.value.clone()));
                }
            }
        }
        let q = QForm::new(&algebra, conv, &form, &entries, checked)?;
        let braiding = Braiding::diagonal(conv, form.clone())?;
        Ok(SpeciesSpec {
            algebra,
            species,
            conv,
            form,
            q,
            braiding,
        })
    }

    /// One species `a` of grade (1,0), M = I₂, Q(a_i, a_j⁺) = δ_ij.
    pub fn parafermion(modes: u32) -> SpeciesSpec {
        let g = GradeGroup::new(2, 2).expect("static group");
        SpeciesSpec::new(
            g,
            SigmaForm::identity(g),
            PhaseConvention::plus(2),
            vec![Species::new("a", Grade(vec![1, 0]), modes, true)],
            &[QRule::delta(("a", false), ("a", true), 1)],
            true,
        )
        .expect("static spec")
    }

    /// One species `c` of grade (1,1), M = I₂, Q(c_j⁺, c_i) = δ_ij.
    pub fn paraboson(modes: u32) -> SpeciesSpec {
        let g = GradeGroup::new(2, 2).expect("static group");
        SpeciesSpec::new(
            g,
            SigmaForm::identity(g),
            PhaseConvention::plus(2),
            vec![Species::new("c", Grade(vec![1, 1]), modes, true)],
            &[QRule::delta(("c", true), ("c", false), 1)],
            true,
        )
        .expect("static spec")
    }

    /// Species `a` of grade (1,0) and `c` of grade (1,1) with their own pairings, no cross terms.
    pub fn mixed(modes: u32) -> SpeciesSpec {
        let g = GradeGroup::new(2, 2).expect("static group");
        SpeciesSpec::new(
            g,
            SigmaForm::identity(g),
            PhaseConvention::plus(2),
            vec![
                Species::new("a", Grade(vec![1, 0]), modes, true),
                Species::new("c", Grade(vec![1, 1]), modes, true),
            ],
            &[
                QRule::delta(("a", true), ("a", false), 1),
                QRule::delta(("c", true), ("c", false), 1),
            ],
            true,
        )
        .expect("static spec")
    }

    /// Species `a` (1,0), `b` (0,1), `c` (1,1) with an antisymmetric pairing on `b`
    /// even though its grade is odd. The form is unchecked; see [`check_deviations`].
    pub fn three_species_unchecked(modes: u32) -> SpeciesSpec {
        let g = GradeGroup::new(2, 2).expect("static group");
        SpeciesSpec::new(
            g,
            SigmaForm::identity(g),
            PhaseConvention::plus(2),
            vec![
                Species::new("a", Grade(vec![1, 0]), modes, true),
                Species::new("b", Grade(vec![0, 1]), modes, true),
                Species::new("c", Grade(vec![1, 1]), modes, true),
            ],
            &[
                QRule::delta(("a", true), ("a", false), 1),
                QRule::delta(("a", false), ("a", true), 1),
                QRule::delta(("b", true), ("b", false), 1),
                QRule::delta(("b", false), ("b", true), -1),
                QRule::delta(("c", true), ("c", false), 1),
            ],
            false,
        )
        .expect("static spec")
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn convention(&self) -> PhaseConvention {
        self.conv
    }

    pub fn form(&self) -> &SigmaForm {
        &self.form
    }

    pub fn q(&self) -> &QForm {
        &self.q
    }

    pub fn braiding(&self) -> &Braiding {
        &self.braiding
    }

    pub fn generator_elements(&self) -> Vec<Element> {
        (0..self.algebra.len() as GenId)
            .map(|g| Element::monomial(&self.algebra, vec![g], Scalar::one()))
            .collect()
    }

    pub fn element(&self, id: &str) -> Result<Element> {
        Element::generator(&self.algebra, id)
    }

    fn phase(&self, g: &Grade, h: &Grade) -> Scalar {
        self.conv.phase_for_sigma(self.form.sigma_unchecked(g, h))
    }
}

fn rule_id((name, dagger): &(String, bool)) -> String {
    format!("{name}{}", if *dagger { "+" } else { "" })
}

pub fn q_eval(q: &QForm, g: GenId, h: GenId) -> Scalar {
    q.eval(g, h)
}

fn span_grade(x: &Element) -> Result<Grade> {
    if x.terms().keys().any(|w| w.len() != 1) {
        return Err(Error::OutsideSpan(x.render()));
    }
    x.homogeneous_grade()
}

/// The bracket realized through the quadratic form; outputs lie in the generator span.
pub fn bracket_via_q(side: Side, spec: &SpeciesSpec, a: &Element, b: &Element, c: &Element) -> Result<Element> {
    let (gi, gj, gk) = (span_grade(a)?, span_grade(b)?, span_grade(c)?);
    let alg = &spec.algebra;
    for x in [a, b, c] {
        if x.spec().fingerprint() != alg.fingerprint() {
            return Err(Error::SpecMismatch);
        }
    }
    let sij = spec.phase(&gi, &gj);
    let sik = spec.phase(&gi, &gk);
    let sjk = spec.phase(&gj, &gk);
    let q = &spec.q;
    let mut out = Element::zero(alg);
    for (wa, ca) in a.terms() {
        for (wb, cb) in b.terms() {
            for (wc, cc) in c.terms() {
                let k = &(ca * cb) * cc;
                let (x, y, z) = (wa[0], wb[0], wc[0]);
                let terms: [(GenId, Scalar); 4] = match side {
                    Side::Left => [
                        (x, q.eval(y, z)),
                        (y, &sij * &q.eval(x, z)),
                        (y, -&(&(&sik * &sjk) * &q.eval(z, x))),
                        (x, -&(&(&(&sij * &sik) * &sjk) * &q.eval(z, y))),
                    ],
                    Side::Right => [
                        (z, q.eval(x, y)),
                        (y, &sjk * &q.eval(x, z)),
                        (y, -&(&(&sij * &sik) * &q.eval(z, x))),
                        (z, -&(&(&(&sjk * &sij) * &sik) * &q.eval(y, x))),
                    ],
                };
                for (g, v) in terms {
                    if !v.is_zero() {
                        out.add_term(vec![g], &k * &v);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// [`bracket_via_q`] as a [`TernaryBracket`].
pub struct QBracket<'a> {
    pub side: Side,
    pub spec: &'a SpeciesSpec,
}

impl TernaryBracket for QBracket<'_> {
    fn side(&self) -> Side {
        self.side
    }

    fn bracket(&self, a: &Element, b: &Element, c: &Element) -> Result<Element> {
        bracket_via_q(self.side, self.spec, a, b, c)
    }

    fn phase(&self, x: &Element, y: &Element) -> Result<Scalar> {
        if x.is_zero() || y.is_zero() {
            return Ok(Scalar::one());
        }
        Ok(self.spec.phase(&span_grade(x)?, &span_grade(y)?))
    }

    fn closed_in_span(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ideal {
    J1,
    J2,
}

/// Generator of the two-sided ideal: the tensor-side ALT bracket minus its Q-realization.
pub fn ideal_generator(which: Ideal, spec: &SpeciesSpec, a: GenId, b: GenId, c: GenId) -> Result<Element> {
    let side = match which {
        Ideal::J1 => Side::Left,
        Ideal::J2 => Side::Right,
    };
    let alg = &spec.algebra;
    let [x, y, z] = [a, b, c].map(|g| Element::monomial(alg, vec![g], Scalar::one()));
    let tensor = ternary_bracket(BracketVariant::new(side, Signs::Alt), &spec.braiding, &x, &y, &z)?;
    tensor.sub(&bracket_via_q(side, spec, &x, &y, &z)?)
}

/// Nested commutator/anticommutator shape of an ALT bracket, when all phases are ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommutatorForm {
    pub side: Side,
    pub inner_anti: bool,
    pub outer_anti: bool,
}

impl CommutatorForm {
    pub fn for_grades(spec: &SpeciesSpec, side: Side, gi: &Grade, gj: &Grade, gk: &Grade) -> Option<CommutatorForm> {
        let sign = |s: Scalar| -> Option<bool> {
            if s.is_one() {
                Some(true)
            } else if (-&s).is_one() {
                Some(false)
            } else {
                None
            }
        };
        let sij = spec.phase(gi, gj);
        let sik = spec.phase(gi, gk);
        let sjk = spec.phase(gj, gk);
        let (inner, outer) = match side {
            Side::Left => (sign(sij)?, sign(&sik * &sjk)?),
            Side::Right => (sign(sjk)?, sign(&sij * &sik)?),
        };
        Some(CommutatorForm {
            side,
            inner_anti: inner,
            outer_anti: !outer,
        })
    }

    pub fn render(&self, a: &str, b: &str, c: &str) -> String {
        let wrap = |anti: bool, x: &str, y: &str| {
            if anti {
                format!("{{{x}, {y}}}")
            } else {
                format!("[{x}, {y}]")
            }
        };
        match self.side {
            Side::Left => wrap(self.outer_anti, &wrap(self.inner_anti, a, b), c),
            Side::Right => wrap(self.outer_anti, a, &wrap(self.inner_anti, b, c)),
        }
    }

    /// The plain (unbraided) nested expression in the free algebra.
    pub fn expand(&self, a: &Element, b: &Element, c: &Element) -> Result<Element> {
        let op = |anti: bool, x: &Element, y: &Element| -> Result<Element> {
            let xy = x.concat(y)?;
            let yx = y.concat(x)?;
            if anti {
                xy.add(&yx)
            } else {
                xy.sub(&yx)
            }
        };
        match self.side {
            Side::Left => op(self.outer_anti, &op(self.inner_anti, a, b)?, c),
            Side::Right => op(self.outer_anti, a, &op(self.inner_anti, b, c)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationRow {
    pub triple: [GenId; 3],
    pub ids: [String; 3],
    pub side: Side,
    pub result: Element,
    pub form: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationTable {
    pub rows: Vec<RelationRow>,
}

impl RelationTable {
    pub fn row(&self, side: Side, ids: [&str; 3]) -> Option<&RelationRow> {
        self.rows.iter().find(|r| r.side == side && r.ids == ids)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let v = json!({
                "side": r.side,
                "variant": "alt",
                "triple": r.ids,
                "result": r.result.render(),
                "form": r.form,
            });
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let lhs: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let n = if r.side == Side::Left { 1 } else { 2 };
                format!("<{}>{n}", r.ids.join(", "))
            })
            .collect();
        let w = lhs.iter().map(|s| s.len()).max().unwrap_or(0);
        let rw = self.rows.iter().map(|r| r.result.render().len()).max().unwrap_or(0);
        let mut out = String::new();
        for (r, l) in self.rows.iter().zip(&lhs) {
            let line = format!(
                "{l:<w$} = {:<rw$}  {}",
                r.result.render(),
                r.form.as_deref().unwrap_or("")
            );
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

/// Every ordered generator triple on the given sides, in (side, triple) order.
pub fn relation_table(spec: &SpeciesSpec, sides: &[Side]) -> Result<RelationTable> {
    let alg = &spec.algebra;
    let n = alg.len() as GenId;
    let mut jobs = Vec::new();
    for &side in sides {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    jobs.push((side, [a, b, c]));
                }
            }
        }
    }
    let rows = jobs
        .into_par_iter()
        .map(|(side, t)| {
            let [x, y, z] = t.map(|g| Element::monomial(alg, vec![g], Scalar::one()));
            let result = bracket_via_q(side, spec, &x, &y, &z)?;
            let ids = t.map(|g| alg.generator(g).id.clone());
            let form = CommutatorForm::for_grades(spec, side, alg.grade(t[0]), alg.grade(t[1]), alg.grade(t[2]))
                .map(|f| f.render(&ids[0], &ids[1], &ids[2]));
            Ok(RelationRow {
                triple: t,
                ids,
                side,
                result,
                form,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RelationTable { rows })
}

/// A three-species relation whose stated value disagrees with the general formula
/// under the given grades and pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationFixture {
    pub side: Side,
    pub triple: [&'static str; 3],
    pub stated: &'static [(i64, &'static str)],
}

impl fmt::Display for DeviationFixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.side, self.triple.join(","))
    }
}

/// Stated values for the three-species examples, at i = j = k = 1.
pub fn deviation_fixtures() -> Vec<DeviationFixture> {
    let d = |side, triple, stated| DeviationFixture { side, triple, stated };
    vec![
        d(Side::Left, ["a1+", "b1+", "b1"], &[(2, "a1+")][..]),
        d(Side::Left, ["a1+", "b1", "a1"], &[][..]),
        d(Side::Left, ["a1+", "b1+", "a1"], &[][..]),
        d(Side::Right, ["a1+", "b1", "a1"], &[(-2, "b1")][..]),
        d(Side::Right, ["a1+", "b1+", "a1"], &[(-2, "b1+")][..]),
        d(Side::Left, ["a1", "b1", "c1"], &[][..]),
        d(Side::Right, ["a1", "b1", "c1"], &[][..]),
    ]
}

/// Computes each deviation fixture with the general formula on
/// [`SpeciesSpec::three_species_unchecked`] and flags every disagreement.
pub fn check_deviations() -> Result<Report> {
    let spec = SpeciesSpec::three_species_unchecked(2);
    let alg = spec.algebra();
    let mut r = Report::new();
    for fx in deviation_fixtures() {
        let [x, y, z] = fx.triple.map(|id| spec.element(id));
        let got = bracket_via_q(fx.side, &spec, &x?, &y?, &z?)?;
        let mut stated = Element::zero(alg);
        for (c, id) in fx.stated {
            stated.add_term(vec![alg.lookup(id)?], Scalar::int(*c));
        }
        let note = format!("stated {}, general formula gives {}", stated.render(), got.render());
        let v = if got == stated {
            Verdict::pass("parastat.deviation", fx.to_string())
        } else {
            Verdict::fail("parastat.deviation", fx.to_string(), got.render()).with_status(Status::Flagged)
        };
        r.push(v.with_note(note));
    }
    Ok(r)
}
