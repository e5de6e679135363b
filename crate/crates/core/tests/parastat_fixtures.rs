//! Worked trilinear relations for two modes per species, compared coefficient by coefficient.

use parabraid_core::parastat::{relation_table, CommutatorForm, RelationTable};
use parabraid_core::ternary::ternary_bracket;
use parabraid_core::{BracketVariant, Element, Scalar, Side, Signs, SpeciesSpec};

const MODES: [u32; 2] = [1, 2];

fn id(name: &str, i: u32, dagger: bool) -> String {
    format!("{name}{i}{}", if dagger { "+" } else { "" })
}

fn d(x: u32, y: u32) -> i64 {
    i64::from(x == y)
}

/// Sum of coeff * generator, skipping zero coefficients.
fn expected(spec: &SpeciesSpec, terms: &[(i64, String)]) -> Element {
    let mut out = Element::zero(spec.algebra());
    for (c, g) in terms {
        if *c != 0 {
            out = out.add(&spec.element(g).unwrap().scale(&Scalar::int(*c))).unwrap();
        }
    }
    out
}

type Rule = fn(u32, u32, u32) -> Vec<(i64, (bool, u32))>;

/// Checks one relation family over all mode triples. `pattern` gives the daggers of the
/// three arguments; `rule` returns (coefficient, (dagger, mode)) terms of the result.
fn family(spec: &SpeciesSpec, table: &RelationTable, side: Side, names: [&str; 3], pattern: [bool; 3], out: &str, rule: Rule) {
    for i in MODES {
        for j in MODES {
            for k in MODES {
                let ids = [id(names[0], i, pattern[0]), id(names[1], j, pattern[1]), id(names[2], k, pattern[2])];
                let row = table
                    .row(side, [&ids[0], &ids[1], &ids[2]])
                    .unwrap_or_else(|| panic!("missing row {ids:?}"));
                let terms: Vec<(i64, String)> =
                    rule(i, j, k).into_iter().map(|(c, (dag, m))| (c, id(out, m, dag))).collect();
                let want = expected(spec, &terms);
                assert_eq!(row.result, want, "{side:?} {ids:?}: got {}, want {}", row.result.render(), want.render());
            }
        }
    }
}

#[test]
fn parafermion_relations() {
    let spec = SpeciesSpec::parafermion(2);
    let t = relation_table(&spec, &[Side::Left, Side::Right]).unwrap();
    let a = ["a", "a", "a"];
    family(&spec, &t, Side::Left, a, [false, true, false], "a", |i, j, k| vec![(2 * d(j, k), (false, i))]);
    family(&spec, &t, Side::Left, a, [true, true, false], "a", |i, j, k| {
        vec![(2 * d(j, k), (true, i)), (-2 * d(i, k), (true, j))]
    });
    family(&spec, &t, Side::Right, a, [false, true, false], "a", |i, j, k| vec![(2 * d(i, j), (false, k))]);
    family(&spec, &t, Side::Right, a, [true, true, false], "a", |i, j, k| vec![(-2 * d(i, k), (true, j))]);
}

#[test]
fn paraboson_relations() {
    let spec = SpeciesSpec::paraboson(2);
    let t = relation_table(&spec, &[Side::Left, Side::Right]).unwrap();
    let c = ["c", "c", "c"];
    use Side::{Left, Right};
    family(&spec, &t, Left, c, [false, true, false], "c", |i, j, k| vec![(2 * d(j, k), (false, i))]);
    family(&spec, &t, Left, c, [false, true, true], "c", |i, j, k| vec![(-2 * d(i, k), (true, j))]);
    family(&spec, &t, Left, c, [false, false, true], "c", |i, j, k| {
        vec![(-2 * d(j, k), (false, i)), (-2 * d(i, k), (false, j))]
    });
    family(&spec, &t, Left, c, [true, true, false], "c", |i, j, k| {
        vec![(2 * d(j, k), (true, i)), (2 * d(i, k), (true, j))]
    });
    family(&spec, &t, Left, c, [false, false, false], "c", |_, _, _| vec![]);
    family(&spec, &t, Left, c, [true, true, true], "c", |_, _, _| vec![]);

    family(&spec, &t, Right, c, [false, true, false], "c", |i, j, k| vec![(-2 * d(i, j), (false, k))]);
    family(&spec, &t, Right, c, [false, true, true], "c", |i, j, k| {
        vec![(-2 * d(i, j), (true, k)), (-2 * d(i, k), (true, j))]
    });
    family(&spec, &t, Right, c, [false, false, true], "c", |i, j, k| vec![(-2 * d(i, k), (false, j))]);
    family(&spec, &t, Right, c, [true, true, false], "c", |i, j, k| vec![(2 * d(i, k), (true, j))]);
    family(&spec, &t, Right, c, [false, false, false], "c", |_, _, _| vec![]);
    family(&spec, &t, Right, c, [true, true, true], "c", |_, _, _| vec![]);
}

#[test]
fn mixed_relations() {
    let spec = SpeciesSpec::mixed(2);
    let t = relation_table(&spec, &[Side::Left, Side::Right]).unwrap();
    for side in [Side::Left, Side::Right] {
        family(&spec, &t, side, ["a", "c", "a"], [false, false, true], "c", |i, j, k| vec![(-2 * d(i, k), (false, j))]);
    }
}

#[test]
fn commutator_forms_render_with_brackets_and_braces() {
    let cases: [(SpeciesSpec, Side, [&str; 3], &str); 6] = [
        (SpeciesSpec::parafermion(2), Side::Left, ["a1", "a2+", "a1"], "[[a1, a2+], a1]"),
        (SpeciesSpec::parafermion(2), Side::Right, ["a1", "a2+", "a1"], "[a1, [a2+, a1]]"),
        (SpeciesSpec::paraboson(2), Side::Left, ["c1", "c2+", "c1"], "[{c1, c2+}, c1]"),
        (SpeciesSpec::paraboson(2), Side::Right, ["c1", "c2+", "c1"], "[c1, {c2+, c1}]"),
        (SpeciesSpec::mixed(2), Side::Left, ["a1", "c2", "a1+"], "[[a1, c2], a1+]"),
        (SpeciesSpec::mixed(2), Side::Right, ["a1", "c2", "a1+"], "[a1, [c2, a1+]]"),
    ];
    for (spec, side, ids, form) in cases {
        let t = relation_table(&spec, &[side]).unwrap();
        assert_eq!(t.row(side, ids).unwrap().form.as_deref(), Some(form));
    }
}

/// The commutator form, expanded in the free algebra, is the ALT tensor bracket.
#[test]
fn commutator_expansion_is_the_alt_bracket() {
    for spec in [SpeciesSpec::parafermion(2), SpeciesSpec::paraboson(2), SpeciesSpec::mixed(1)] {
        let gens = spec.generator_elements();
        for side in [Side::Left, Side::Right] {
            let v = BracketVariant::new(side, Signs::Alt);
            for a in &gens {
                for b in &gens {
                    for c in &gens {
                        let g = |x: &Element| x.homogeneous_grade().unwrap();
                        let form = CommutatorForm::for_grades(&spec, side, &g(a), &g(b), &g(c)).unwrap();
                        let want = ternary_bracket(v, spec.braiding(), a, b, c).unwrap();
                        assert_eq!(form.expand(a, b, c).unwrap(), want);
                    }
                }
            }
        }
    }
}
