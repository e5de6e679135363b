//! The free graded tensor algebra T(A) over a finite generator set.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactscalar::Scalar;
use crate::grading::{Grade, GradeGroup};

/// Index of a generator in its [`AlgebraSpec`].
pub type GenId = u32;

/// A word is a flat sequence of generator indices; the empty word is the unit.
pub type Word = Vec<GenId>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpeciesTag {
    pub name: String,
    pub dagger: bool,
    pub mode: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub grade: Grade,
    pub species: Option<SpeciesTag>,
}

impl Generator {
    pub fn new(id: impl Into<String>, grade: Grade) -> Generator {
        Generator {
            id: id.into(),
            grade,
            species: None,
        }
    }

    pub fn with_species(mut self, tag: SpeciesTag) -> Generator {
        self.species = Some(tag);
        self
    }
}

#[derive(Debug)]
pub struct AlgebraSpec {
    group: GradeGroup,
    generators: Vec<Generator>,
    index: HashMap<String, GenId>,
    bases: HashMap<Grade, Vec<GenId>>,
    local: Vec<u32>,
    fingerprint: u64,
}

impl AlgebraSpec {
    pub fn new(group: GradeGroup, generators: Vec<Generator>) -> Result<Arc<AlgebraSpec>> {
        let mut index = HashMap::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if !group.contains(&g.grade) {
                return Err(Error::InvalidGrade {
                    grade: g.grade.0.iter().map(|&r| r as i64).collect(),
                    modulus: group.modulus,
                    rank: group.rank,
                });
            }
            if index.insert(g.id.clone(), i as GenId).is_some() {
                return Err(Error::DuplicateGenerator(g.id.clone()));
            }
        }
        let mut bases: HashMap<Grade, Vec<GenId>> = HashMap::new();
        let mut local = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            let b = bases.entry(g.grade.clone()).or_default();
            local.push(b.len() as u32);
            b.push(i as GenId);
        }
        let mut h = DefaultHasher::new();
        group.hash(&mut h);
        generators.hash(&mut h);
        Ok(Arc::new(AlgebraSpec {
            group,
            generators,
            index,
            bases,
            local,
            fingerprint: h.finish(),
        }))
    }

    pub fn group(&self) -> GradeGroup {
        self.group
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn lookup(&self, id: &str) -> Result<GenId> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(id.to_string()))
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.generators[g as usize]
    }

    pub fn grade(&self, g: GenId) -> &Grade {
        &self.generators[g as usize].grade
    }

    pub fn word_grade(&self, w: &[GenId]) -> Grade {
        w.iter()
            .fold(self.group.zero(), |acc, &g| self.group.add(&acc, self.grade(g)))
    }

    /// Generators of the given grade, in declaration order.
    pub fn basis(&self, grade: &Grade) -> &[GenId] {
        self.bases.get(grade).map_or(&[], Vec::as_slice)
    }

    /// Position of a generator within the basis of its grade.
    pub fn local_index(&self, g: GenId) -> usize {
        self.local[g as usize] as usize
    }

    /// Grades carrying at least one generator, sorted.
    pub fn occupied_grades(&self) -> Vec<Grade> {
        let mut g: Vec<Grade> = self.bases.keys().cloned().collect();
        g.sort();
        g
    }

    pub fn parse_word(&self, ids: &[&str]) -> Result<Word> {
        ids.iter().map(|id| self.lookup(id)).collect()
    }

    pub fn render_word(&self, w: &[GenId]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<&str> = w.iter().map(|&g| self.generator(g).id.as_str()).collect();
        parts.join(".")
    }
}

/// Finite linear combination of words with exact coefficients.
#[derive(Clone)]
pub struct Element {
    spec: Arc<AlgebraSpec>,
    terms: BTreeMap<Word, Scalar>,
}

impl Element {
    pub fn zero(spec: &Arc<AlgebraSpec>) -> Element {
        Element {
            spec: Arc::clone(spec),
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(spec: &Arc<AlgebraSpec>) -> Element {
        Element::monomial(spec, Vec::new(), Scalar::one())
    }

    pub fn monomial(spec: &Arc<AlgebraSpec>, word: Word, coeff: Scalar) -> Element {
        let mut e = Element::zero(spec);
        e.add_term(word, coeff);
        e
    }

    pub fn generator(spec: &Arc<AlgebraSpec>, id: &str) -> Result<Element> {
        Ok(Element::monomial(spec, vec![spec.lookup(id)?], Scalar::one()))
    }

    pub fn word(spec: &Arc<AlgebraSpec>, ids: &[&str]) -> Result<Element> {
        Ok(Element::monomial(spec, spec.parse_word(ids)?, Scalar::one()))
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, Scalar> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[GenId]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Accumulate `coeff * word`, dropping the entry if it cancels.
    pub fn add_term(&mut self, word: Word, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn same_spec(&self, other: &Element) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec.fingerprint == other.spec.fingerprint {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.same_spec(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.same_spec(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        Ok(out)
    }

    /// In-place `self += c * other`.
    pub fn axpy(&mut self, c: &Scalar, other: &Element) -> Result<()> {
        self.same_spec(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), c * x);
        }
        Ok(())
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut out = Element::zero(&self.spec);
        if c.is_zero() {
            return out;
        }
        for (w, x) in &self.terms {
            out.terms.insert(w.clone(), c * x);
        }
        out
    }

    pub fn neg(&self) -> Element {
        self.scale(&Scalar::int(-1))
    }

    /// Concatenation product, extended bilinearly.
    pub fn concat(&self, other: &Element) -> Result<Element> {
        self.same_spec(other)?;
        let mut out = Element::zero(&self.spec);
        for (u, x) in &self.terms {
            for (v, y) in &other.terms {
                let mut w = Vec::with_capacity(u.len() + v.len());
                w.extend_from_slice(u);
                w.extend_from_slice(v);
                out.add_term(w, x * y);
            }
        }
        Ok(out)
    }

    pub fn concat_all(parts: &[&Element]) -> Result<Element> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::Shape("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, e| acc.concat(e))
    }

    /// Common total grade of all words; `None` when the grades differ.
    /// The zero element has the zero grade.
    pub fn grade_of(&self) -> Option<Grade> {
        let mut it = self.terms.keys().map(|w| self.spec.word_grade(w));
        let first = match it.next() {
            Some(g) => g,
            None => return Some(self.spec.group.zero()),
        };
        it.all(|g| g == first).then_some(first)
    }

    pub fn homogeneous_grade(&self) -> Result<Grade> {
        self.grade_of()
            .ok_or_else(|| Error::Inhomogeneous(self.render()))
    }

    /// Common word length, if all words share one.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Vec::len);
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }

    /// Apply a linear map given on words.
    pub fn map_words<F>(&self, mut f: F) -> Result<Element>
    where
        F: FnMut(&[GenId]) -> Result<Element>,
    {
        let mut out = Element::zero(&self.spec);
        for (w, c) in &self.terms {
            let image = f(w)?;
            out.axpy(c, &image)?;
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let cs = c.to_string();
                let cs = if cs.contains('+') { format!("({cs})") } else { cs };
                format!("{cs}*{}", self.spec.render_word(w))
            })
            .collect();
        parts.join(" + ")
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Element) -> bool {
        self.spec.fingerprint == other.spec.fingerprint && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec() -> Arc<AlgebraSpec> {
        let g = GradeGroup::new(2, 2).unwrap();
        AlgebraSpec::new(
            g,
            vec![
                Generator::new("a", g.grade(&[1, 0]).unwrap()),
                Generator::new("b", g.grade(&[0, 1]).unwrap()),
                Generator::new("c", g.grade(&[1, 1]).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn combine_examples() {
        let s = spec();
        let w = Element::word(&s, &["a", "b"]).unwrap();
        assert!(w.add(&w.scale(&Scalar::int(-1))).unwrap().is_zero());
        let abc = Element::word(&s, &["a", "b"])
            .unwrap()
            .concat(&Element::generator(&s, "c").unwrap())
            .unwrap();
        assert_eq!(abc, Element::word(&s, &["a", "b", "c"]).unwrap());
        assert_eq!(abc.render(), "1*a.b.c");
        let z = Scalar::phase(1, 3).unwrap();
        let z2 = Scalar::phase(2, 3).unwrap();
        assert_eq!(w.scale(&z2).scale(&z), w);
    }

    #[test]
    fn grade_examples() {
        let s = spec();
        let g = s.group();
        assert_eq!(
            Element::word(&s, &["a", "b"]).unwrap().grade_of(),
            Some(g.grade(&[1, 1]).unwrap())
        );
        assert_eq!(Element::unit(&s).grade_of(), Some(g.zero()));
        let mixed = Element::generator(&s, "a")
            .unwrap()
            .add(&Element::generator(&s, "c").unwrap())
            .unwrap();
        assert_eq!(mixed.grade_of(), None);
        assert!(matches!(mixed.homogeneous_grade(), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn spec_errors() {
        let s = spec();
        let g = s.group();
        let other = AlgebraSpec::new(g, vec![Generator::new("x", g.zero())]).unwrap();
        let x = Element::generator(&other, "x").unwrap();
        let a = Element::generator(&s, "a").unwrap();
        assert_eq!(a.add(&x), Err(Error::SpecMismatch));
        assert_eq!(a.concat(&x), Err(Error::SpecMismatch));
        assert!(matches!(Element::generator(&s, "q"), Err(Error::UnknownGenerator(_))));
        let dup = AlgebraSpec::new(g, vec![Generator::new("x", g.zero()), Generator::new("x", g.zero())]);
        assert!(matches!(dup, Err(Error::DuplicateGenerator(_))));
        let bad = AlgebraSpec::new(g, vec![Generator::new("x", Grade(vec![2, 0]))]);
        assert!(matches!(bad, Err(Error::InvalidGrade { .. })));
    }

    #[test]
    fn rendering() {
        let s = spec();
        let a = Element::generator(&s, "a").unwrap();
        let b = Element::generator(&s, "b").unwrap();
        let e = b.scale(&Scalar::int(2)).sub(&a).unwrap();
        assert_eq!(e.render(), "-1*a + 2*b");
        assert_eq!(Element::zero(&s).render(), "0");
        assert_eq!(Element::unit(&s).render(), "1*1");
        let z3 = a.scale(&Scalar::phase(2, 3).unwrap());
        assert_eq!(z3.render(), "(-1*z^0@3+-1*z^1@3)*a");
    }

    fn arb_element(s: Arc<AlgebraSpec>) -> impl Strategy<Value = Element> {
        prop::collection::vec(
            (prop::collection::vec(0u32..3, 0..3), -3i64..4, 0i64..4),
            0..4,
        )
        .prop_map(move |terms| {
            let mut e = Element::zero(&s);
            for (w, c, k) in terms {
                let coeff = &Scalar::int(c) * &Scalar::phase(k, 4).unwrap();
                e.add_term(w, coeff);
            }
            e
        })
    }

    fn arb_word_element(s: Arc<AlgebraSpec>) -> impl Strategy<Value = Element> {
        (prop::collection::vec(0u32..3, 0..4), 1i64..5)
            .prop_map(move |(w, c)| Element::monomial(&s, w, Scalar::int(c)))
    }

    proptest! {
        #[test]
        fn concat_associative(x in arb_element(spec()), y in arb_element(spec()), z in arb_element(spec())) {
            let l = x.concat(&y).unwrap().concat(&z).unwrap();
            let r = x.concat(&y.concat(&z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn concat_unital(x in arb_element(spec())) {
            let u = Element::unit(x.spec());
            prop_assert_eq!(&u.concat(&x).unwrap(), &x);
            prop_assert_eq!(&x.concat(&u).unwrap(), &x);
        }

        #[test]
        fn grade_additive(x in arb_word_element(spec()), y in arb_word_element(spec())) {
            let g = x.spec().group();
            let gx = x.grade_of().unwrap();
            let gy = y.grade_of().unwrap();
            prop_assert_eq!(x.concat(&y).unwrap().grade_of().unwrap(), g.add(&gx, &gy));
        }

        #[test]
        fn sub_self_is_zero(x in arb_element(spec())) {
            prop_assert!(x.sub(&x).unwrap().is_zero());
        }
    }
}
