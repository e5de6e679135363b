//! Spec files: JSON documents declaring a grading, a braiding and optional
//! generators, species and quadratic-form rules.
//!
//! ```json
//! {
//!   "group": {"modulus": 2, "rank": 2},
//!   "M": [[1, 0], [0, 1]],
//!   "epsilon": 1,
//!   "braiding": {"kind": "diagonal"},
//!   "species": [{"name": "a", "grade": [1, 0], "modes": 2, "daggers": true}],
//!   "Q": [{"pair": ["a", "a+"], "value": "delta"}],
//!   "variant": "alt"
//! }
//! ```
//!
//! Matrix braidings list one component per ordered grade pair, entries as scalar strings:
//! `{"kind": "matrix", "components": [{"grades": [[0], [0]], "matrix": [["2", "0"], ...]}]}`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde_json::Value;

use crate::braiding::Braiding;
use crate::error::{Error, Result};
use crate::exactscalar::Scalar;
use crate::freealg::{AlgebraSpec, Generator};
use crate::grading::{Grade, GradeGroup, PhaseConvention, SigmaForm};
use crate::linalg::Matrix;
use crate::parastat::{QRule, Species, SpeciesSpec};
use crate::ternary::Signs;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub threads: Option<usize>,
    pub report: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ArtifactSpec {
    pub group: GradeGroup,
    pub form: Option<SigmaForm>,
    pub convention: PhaseConvention,
    pub braiding: Braiding,
    pub generators: Option<Arc<AlgebraSpec>>,
    pub species: Option<SpeciesSpec>,
    pub variant: Signs,
    pub options: RunOptions,
}

impl ArtifactSpec {
    /// Algebra that bracket arguments are resolved in: species, then explicit
    /// generators, then the braiding's own basis for matrix braidings.
    pub fn algebra(&self) -> Option<Arc<AlgebraSpec>> {
        if let Some(s) = &self.species {
            return Some(s.algebra().clone());
        }
        if let Some(g) = &self.generators {
            return Some(g.clone());
        }
        match &self.braiding {
            Braiding::Matrix(_) => Some(self.braiding.basis_spec()),
            Braiding::Diagonal(_) => None,
        }
    }

    /// Grades that checks sweep: those carrying generators, or the whole group.
    pub fn sweep_grades(&self) -> Vec<Grade> {
        match self.algebra() {
            Some(a) if self.braiding.is_diagonal() => a.occupied_grades(),
            _ => self.braiding.grades(),
        }
    }
}

pub fn parse_spec_file(path: &Path) -> Result<ArtifactSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

struct Walker {
    violations: Vec<String>,
}

impl Walker {
    fn bad(&mut self, ptr: &str, msg: impl AsRef<str>) {
        self.violations.push(format!("{}: {}", if ptr.is_empty() { "/" } else { ptr }, msg.as_ref()));
    }

    fn uint(&mut self, v: Option<&Value>, ptr: &str, min: u64) -> Option<u64> {
        match v {
            None => {
                self.bad(ptr, "missing");
                None
            }
            Some(x) => match x.as_u64() {
                Some(n) if n >= min => Some(n),
                _ => {
                    self.bad(ptr, format!("must be an integer >= {min}"));
                    None
                }
            },
        }
    }

    fn grade(&mut self, v: &Value, ptr: &str, group: Option<GradeGroup>) -> Option<Grade> {
        let Some(arr) = v.as_array() else {
            self.bad(ptr, "grade must be an array of residues");
            return None;
        };
        let mut res = Vec::new();
        let mut ok = true;
        for (i, r) in arr.iter().enumerate() {
            match r.as_i64() {
                Some(x) => res.push(x),
                None => {
                    self.bad(&format!("{ptr}/{i}"), "residue must be an integer");
                    ok = false;
                }
            }
        }
        let group = group?;
        if !ok {
            return None;
        }
        if res.len() != group.rank {
            self.bad(ptr, format!("grade has {} residues, rank is {}", res.len(), group.rank));
            return None;
        }
        for (i, &x) in res.iter().enumerate() {
            if x < 0 || x >= group.modulus as i64 {
                self.bad(&format!("{ptr}/{i}"), format!("residue {x} out of range for Z_{}", group.modulus));
                ok = false;
            }
        }
        if !ok {
            return None;
        }
        group.grade(&res).ok()
    }

    fn scalar(&mut self, v: &Value, ptr: &str) -> Option<Scalar> {
        let parsed = match v {
            Value::String(s) => s.parse::<Scalar>().ok(),
            Value::Number(n) => n.as_i64().map(Scalar::int),
            _ => None,
        };
        if parsed.is_none() {
            self.bad(ptr, "must be a scalar (integer or string such as \"3/2\" or \"1*z^1@3\")");
        }
        parsed
    }
}

pub fn parse_spec(text: &str) -> Result<ArtifactSpec> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let Some(obj) = doc.as_object() else {
        return Err(Error::Schema(vec!["/: spec must be a JSON object".into()]));
    };
    let known = ["group", "M", "epsilon", "braiding", "generators", "species", "Q", "variant", "options"];
    let mut w = Walker { violations: Vec::new() };
    for k in obj.keys() {
        if !known.contains(&k.as_str()) {
            w.bad(&format!("/{k}"), "unknown field");
        }
    }

    let group = match obj.get("group") {
        Some(Value::Object(g)) => {
            let n = w.uint(g.get("modulus"), "/group/modulus", 1);
            let k = w.uint(g.get("rank"), "/group/rank", 1);
            match (n, k) {
                (Some(n), Some(k)) => GradeGroup::new(n as u32, k as usize).ok(),
                _ => None,
            }
        }
        _ => {
            w.bad("/group", "missing or not an object");
            None
        }
    };

    let form = match (obj.get("M"), group) {
        (None, _) => None,
        (Some(m), g) => parse_form(&mut w, m, g),
    };

    let bobj = obj.get("braiding").and_then(Value::as_object);
    if obj.get("braiding").is_some() && bobj.is_none() {
        w.bad("/braiding", "must be an object");
    }
    let eps_top = obj.get("epsilon");
    let eps_inner = bobj.and_then(|b| b.get("epsilon"));
    let parse_eps = |w: &mut Walker, v: &Value, ptr: &str| match v.as_i64() {
        Some(e @ (1 | -1)) => Some(e),
        _ => {
            w.bad(ptr, "epsilon must be 1 or -1");
            None
        }
    };
    let e1 = eps_top.and_then(|v| parse_eps(&mut w, v, "/epsilon"));
    let e2 = eps_inner.and_then(|v| parse_eps(&mut w, v, "/braiding/epsilon"));
    if let (Some(a), Some(b)) = (e1, e2) {
        if a != b {
            w.bad("/braiding/epsilon", format!("conflicts with top-level epsilon {a}"));
        }
    }
    let epsilon = e1.or(e2).unwrap_or(1);
    let convention = group.and_then(|g| PhaseConvention::new(epsilon, g.modulus).ok());

    let kind = bobj
        .and_then(|b| b.get("kind"))
        .map(|k| k.as_str().unwrap_or("?").to_string())
        .unwrap_or_else(|| "diagonal".into());
    let braiding = match kind.as_str() {
        "diagonal" => match (&form, convention) {
            (Some(f), Some(c)) => Braiding::diagonal(c, f.clone()).ok(),
            (None, _) if group.is_some() && obj.get("M").is_none() => {
                w.bad("/M", "missing (required for a diagonal braiding)");
                None
            }
            _ => None,
        },
        "matrix" => group.and_then(|g| parse_matrix_braiding(&mut w, bobj.expect("kind came from it"), g)),
        other => {
            w.bad("/braiding/kind", format!("unknown kind `{other}` (diagonal or matrix)"));
            None
        }
    };

    let generators = match obj.get("generators") {
        None => None,
        Some(Value::Array(gs)) => {
            let mut out = Vec::new();
            for (i, g) in gs.iter().enumerate() {
                let ptr = format!("/generators/{i}");
                let id = g.get("id").and_then(Value::as_str);
                if id.is_none() {
                    w.bad(&format!("{ptr}/id"), "missing or not a string");
                }
                let grade = match g.get("grade") {
                    Some(v) => w.grade(v, &format!("{ptr}/grade"), group),
                    None => {
                        w.bad(&format!("{ptr}/grade"), "missing");
                        None
                    }
                };
                if let (Some(id), Some(grade)) = (id, grade) {
                    out.push(Generator::new(id, grade));
                }
            }
            match group {
                Some(g) if out.len() == gs.len() => match AlgebraSpec::new(g, out) {
                    Ok(a) => Some(a),
                    Err(e) => {
                        w.bad("/generators", e.to_string());
                        None
                    }
                },
                _ => None,
            }
        }
        Some(_) => {
            w.bad("/generators", "must be an array");
            None
        }
    };

    let variant = match obj.get("variant").map(|v| v.as_str()) {
        None => Signs::Alt,
        Some(Some("alt")) => Signs::Alt,
        Some(Some("sym")) => Signs::Sym,
        Some(_) => {
            w.bad("/variant", "must be \"alt\" or \"sym\"");
            Signs::Alt
        }
    };

    let mut options = RunOptions::default();
    if let Some(o) = obj.get("options") {
        match o.as_object() {
            Some(o) => {
                if let Some(t) = o.get("threads") {
                    options.threads = w.uint(Some(t), "/options/threads", 1).map(|t| t as usize);
                }
                if let Some(r) = o.get("report") {
                    match r.as_str() {
                        Some(s) => options.report = Some(s.to_string()),
                        None => w.bad("/options/report", "must be a string"),
                    }
                }
            }
            None => w.bad("/options", "must be an object"),
        }
    }

    let species_decl = parse_species(&mut w, obj.get("species"), group);
    let rules = parse_q(&mut w, obj.get("Q"), species_decl.as_deref());
    if species_decl.is_none() && obj.get("Q").is_some() {
        w.bad("/Q", "requires a species block");
    }
    if species_decl.is_some() && kind == "matrix" {
        w.bad("/species", "species need a diagonal braiding");
    }
    if generators.is_some() && species_decl.is_some() {
        w.bad("/generators", "give either generators or species, not both");
    }

    if !w.violations.is_empty() {
        return Err(Error::Schema(w.violations));
    }
    let group = group.expect("no violations");
    let convention = convention.expect("no violations");
    let braiding = braiding.expect("no violations");
    let species = match species_decl {
        Some(decl) => Some(SpeciesSpec::new(
            group,
            form.clone().expect("diagonal braiding has a form"),
            convention,
            decl,
            &rules.unwrap_or_default(),
            true,
        )?),
        None => None,
    };
    Ok(ArtifactSpec {
        group,
        form,
        convention,
        braiding,
        generators,
        species,
        variant,
        options,
    })
}

fn parse_form(w: &mut Walker, m: &Value, group: Option<GradeGroup>) -> Option<SigmaForm> {
    let Some(rows) = m.as_array() else {
        w.bad("/M", "must be a square integer matrix");
        return None;
    };
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let Some(r) = r.as_array() else {
            w.bad(&format!("/M/{i}"), "row must be an array");
            return None;
        };
        let mut row = Vec::new();
        for (j, x) in r.iter().enumerate() {
            match x.as_i64() {
                Some(v) => row.push(v),
                None => {
                    w.bad(&format!("/M/{i}/{j}"), "entry must be an integer");
                    return None;
                }
            }
        }
        out.push(row);
    }
    let group = group?;
    if out.len() != group.rank || out.iter().any(|r| r.len() != group.rank) {
        w.bad("/M", format!("must be {0}x{0} to match the rank", group.rank));
        return None;
    }
    match SigmaForm::new(group.modulus, out) {
        Ok(f) => Some(f),
        Err(e) => {
            w.bad("/M", e.to_string());
            None
        }
    }
}

fn parse_matrix_braiding(w: &mut Walker, b: &serde_json::Map<String, Value>, group: GradeGroup) -> Option<Braiding> {
    let Some(comps) = b.get("components").and_then(Value::as_array) else {
        w.bad("/braiding/components", "missing or not an array");
        return None;
    };
    let mut parsed: Vec<((Grade, Grade), Matrix)> = Vec::new();
    let mut ok = true;
    for (i, c) in comps.iter().enumerate() {
        let ptr = format!("/braiding/components/{i}");
        let grades = c.get("grades").and_then(Value::as_array);
        let pair = match grades {
            Some(gs) if gs.len() == 2 => {
                let v = w.grade(&gs[0], &format!("{ptr}/grades/0"), Some(group));
                let u = w.grade(&gs[1], &format!("{ptr}/grades/1"), Some(group));
                v.zip(u)
            }
            _ => {
                w.bad(&format!("{ptr}/grades"), "must be a pair of grades");
                None
            }
        };
        let mut matrix = Vec::new();
        match c.get("matrix").and_then(Value::as_array) {
            Some(rows) => {
                for (r, row) in rows.iter().enumerate() {
                    match row.as_array() {
                        Some(row) => {
                            let mut out = Vec::new();
                            for (k, x) in row.iter().enumerate() {
                                match w.scalar(x, &format!("{ptr}/matrix/{r}/{k}")) {
                                    Some(s) => out.push(s),
                                    None => ok = false,
                                }
                            }
                            matrix.push(out);
                        }
                        None => {
                            w.bad(&format!("{ptr}/matrix/{r}"), "row must be an array");
                            ok = false;
                        }
                    }
                }
            }
            None => {
                w.bad(&format!("{ptr}/matrix"), "missing or not an array");
                ok = false;
            }
        }
        match pair {
            Some(p) if ok => parsed.push((p, matrix)),
            _ => ok = false,
        }
    }
    if !ok {
        return None;
    }
    let mut dims = BTreeMap::new();
    for ((v, u), m) in &parsed {
        if v == u {
            let d = (1..=m.len()).find(|d| d * d == m.len());
            match d {
                Some(d) => {
                    dims.insert(v.clone(), d);
                }
                None => {
                    w.bad("/braiding/components", format!("component ({v},{v}) has {} rows, not a square", m.len()));
                    return None;
                }
            }
        }
    }
    match Braiding::matrix(group, dims, parsed) {
        Ok(b) => Some(b),
        Err(e) => {
            w.bad("/braiding", format!("{} ({})", e, e.code()));
            None
        }
    }
}

fn parse_species(w: &mut Walker, v: Option<&Value>, group: Option<GradeGroup>) -> Option<Vec<Species>> {
    let v = v?;
    let Some(arr) = v.as_array() else {
        w.bad("/species", "must be an array");
        return None;
    };
    let mut out = Vec::new();
    for (i, s) in arr.iter().enumerate() {
        let ptr = format!("/species/{i}");
        let name = s.get("name").and_then(Value::as_str);
        match name {
            Some(n) if !n.is_empty() && n.chars().all(|c| c.is_ascii_alphabetic()) => {}
            _ => w.bad(&format!("{ptr}/name"), "must be a non-empty alphabetic string"),
        }
        if let Some(n) = name {
            if out.iter().any(|x: &Species| x.name == n) {
                w.bad(&format!("{ptr}/name"), format!("duplicate species `{n}`"));
            }
        }
        let grade = match s.get("grade") {
            Some(g) => w.grade(g, &format!("{ptr}/grade"), group),
            None => {
                w.bad(&format!("{ptr}/grade"), "missing");
                None
            }
        };
        let modes = w.uint(s.get("modes"), &format!("{ptr}/modes"), 1);
        let daggers = match s.get("daggers") {
            None => true,
            Some(Value::Bool(b)) => *b,
            Some(_) => {
                w.bad(&format!("{ptr}/daggers"), "must be a boolean");
                true
            }
        };
        if let (Some(n), Some(g), Some(m)) = (name, grade, modes) {
            out.push(Species::new(n, g, m as u32, daggers));
        }
    }
    (out.len() == arr.len()).then_some(out)
}

fn parse_q(w: &mut Walker, v: Option<&Value>, species: Option<&[Species]>) -> Option<Vec<QRule>> {
    let arr = match v {
        None => return Some(Vec::new()),
        Some(Value::Array(a)) => a,
        Some(_) => {
            w.bad("/Q", "must be an array");
            return None;
        }
    };
    let mut out = Vec::new();
    for (i, r) in arr.iter().enumerate() {
        let ptr = format!("/Q/{i}");
        let side = |w: &mut Walker, k: usize| -> Option<(String, bool)> {
            let s = r.get("pair").and_then(|p| p.get(k)).and_then(Value::as_str);
            let Some(s) = s else {
                w.bad(&format!("{ptr}/pair/{k}"), "missing or not a string");
                return None;
            };
            let (name, dagger) = match s.strip_suffix('+') {
                Some(n) => (n, true),
                None => (s, false),
            };
            if let Some(sp) = species {
                match sp.iter().find(|x| x.name == name) {
                    None => {
                        w.bad(&format!("{ptr}/pair/{k}"), format!("unknown species `{name}`"));
                        return None;
                    }
                    Some(x) if dagger && !x.daggers => {
                        w.bad(&format!("{ptr}/pair/{k}"), format!("species `{name}` has no daggers"));
                        return None;
                    }
                    _ => {}
                }
            }
            Some((name.to_string(), dagger))
        };
        let left = side(w, 0);
        let right = side(w, 1);
        let value = match r.get("value") {
            Some(Value::String(s)) => parse_delta(s),
            Some(Value::Number(n)) if n.as_i64() == Some(0) => Some(Scalar::zero()),
            _ => None,
        };
        if value.is_none() {
            w.bad(&format!("{ptr}/value"), "must be \"delta\", \"-delta\", \"<scalar>*delta\" or 0");
        }
        if let (Some(l), Some(rt), Some(v)) = (left, right, value) {
            out.push(QRule { left: l, right: rt, value: v });
        }
    }
    Some(out)
}

fn parse_delta(s: &str) -> Option<Scalar> {
    let s = s.trim();
    match s {
        "delta" => Some(Scalar::one()),
        "-delta" => Some(Scalar::int(-1)),
        "0" => Some(Scalar::zero()),
        _ => s.strip_suffix("*delta")?.parse().ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARAFERMION: &str = r#"{
        "group": {"modulus": 2, "rank": 2},
        "M": [[1, 0], [0, 1]],
        "braiding": {"kind": "diagonal"},
        "species": [{"name": "a", "grade": [1, 0], "modes": 2, "daggers": true}],
        "Q": [{"pair": ["a", "a+"], "value": "delta"}]
    }"#;

    #[test]
    fn minimal_parafermion() {
        let s = parse_spec(PARAFERMION).unwrap();
        assert_eq!(s.group, GradeGroup::new(2, 2).unwrap());
        assert_eq!(s.form.as_ref().unwrap(), &SigmaForm::identity(s.group));
        let sp = s.species.as_ref().unwrap();
        assert_eq!(sp.species().len(), 1);
        assert_eq!(sp.algebra().len(), 4);
        assert_eq!(s.variant, Signs::Alt);
    }

    #[test]
    fn q_violation_is_reported() {
        let text = PARAFERMION.replace(
            r#"[{"pair": ["a", "a+"], "value": "delta"}]"#,
            r#"[{"pair": ["a", "a+"], "value": "delta"}, {"pair": ["a+", "a"], "value": "-delta"}]"#,
        );
        assert!(matches!(parse_spec(&text), Err(Error::QFormViolation(..))));
    }

    #[test]
    fn schema_violations_carry_pointers() {
        let text = PARAFERMION.replace("\"grade\": [1, 0]", "\"grade\": [2, 0]");
        match parse_spec(&text) {
            Err(Error::Schema(v)) => assert!(v.iter().any(|m| m.starts_with("/species/0/grade/0:")), "{v:?}"),
            other => panic!("{other:?}"),
        }
        let text = r#"{"group": {"modulus": 2, "rank": 1}, "M": [[1]], "epsilon": -1,
            "braiding": {"kind": "diagonal", "epsilon": 1}, "X": 0}"#;
        match parse_spec(&text) {
            Err(Error::Schema(v)) => {
                assert!(v.iter().any(|m| m.starts_with("/braiding/epsilon")), "{v:?}");
                assert!(v.iter().any(|m| m.starts_with("/X: unknown")), "{v:?}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_spec("{"), Err(Error::Json(_))));
    }

    #[test]
    fn matrix_braiding_spec() {
        let text = r#"{
            "group": {"modulus": 2, "rank": 1},
            "braiding": {"kind": "matrix", "components": [
                {"grades": [[0], [0]], "matrix": [
                    ["2", "0", "0", "0"], ["0", "0", "1", "0"], ["0", "1", "3/2", "0"], ["0", "0", "0", "2"]]}
            ]}
        }"#;
        let s = parse_spec(text).unwrap();
        assert_eq!(s.braiding.dim(&Grade(vec![0])), 2);
        assert_eq!(s.algebra().unwrap().len(), 2);
        let bad = text.replace("\"3/2\"", "\"x\"");
        assert!(matches!(parse_spec(&bad), Err(Error::Schema(_))));
    }
}
