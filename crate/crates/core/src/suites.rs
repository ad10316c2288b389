//! Exhaustive check suites over Boolean inverse semigroups and over the
//! Booleanization, grouped so that one call covers a whole area.

use crate::boolean::{
    additive_ideal_generated, all_additive_ideals, check_epsilon_congruence, check_ideal_induced,
    check_skew_join_preserved, check_weakly_meet_preserving, enumerate_morphisms, epsilon_related,
    epsilon_related_by_definition, quotient_by_ideal, skew_conformance, BooleanInvSemigroup, EnumerationLimits,
    MorphismKind, MorphismTable,
};
use crate::completion::{booleanization_checks, booleanize, ck_product_closure_check};
use crate::error::Result;
use crate::fixtures;
use crate::groupoid::{ideal_lattice_correspondence, invariant_identity_subsets, reduction_quotient_check, stone_groupoid};
use crate::report::{Check, CheckReport};
use crate::table::InverseSemigroupTable;

/// Boolean inverse semigroups the suites run on by default: the builtin
/// Boolean fixtures plus the Booleanizations of the non-Boolean ones.
pub fn boolean_fixtures() -> Result<Vec<(String, BooleanInvSemigroup)>> {
    let mut out = Vec::new();
    for (name, t) in [("TWO", fixtures::two()), ("SL22", fixtures::sl22()), ("I2", fixtures::i2()), ("Z2_0", fixtures::z2_0())] {
        out.push((name.to_string(), BooleanInvSemigroup::from_table(t)?));
    }
    for (name, t) in [("CHAIN3", fixtures::chain3()), ("B2", fixtures::b2()), ("SL22", fixtures::sl22())] {
        out.push((format!("B({name})"), booleanize(&t)?.algebra().clone()));
    }
    Ok(out)
}

const ADDITIVE: MorphismKind = MorphismKind { unital: false, additive: true, cover_to_join: false };

/// Skew operations, skew-join preservation, `ε_I`, weakly meet preserving
/// against ideal-induced, minimality of generated ideals, the ideal lattice
/// correspondence and reductions of the Stone groupoid.
pub fn boolean_suite(name: &str, b: &BooleanInvSemigroup, targets: &[(String, BooleanInvSemigroup)]) -> Result<CheckReport> {
    let mut rep = CheckReport::new(format!("Boolean inverse semigroup {name}"));
    rep.absorb("", skew_conformance(b));

    let limits = EnumerationLimits { source: 16, target: 16 };
    let mut morphisms: Vec<(String, &BooleanInvSemigroup, MorphismTable)> = Vec::new();
    for (tname, t) in targets {
        for m in enumerate_morphisms(b, t, ADDITIVE, limits)? {
            morphisms.push((tname.clone(), t, m));
        }
    }
    rep.note(format!("{} additive morphisms enumerated into {} targets", morphisms.len(), targets.len()));
    rep.push(Check::over("additive morphisms send a ▽ b to θ(a) ∨ θ(b) when defined", morphisms.iter(), |(n, t, m)| {
        check_skew_join_preserved(b, t, m).map_err(|w| format!("into {n}: {w}"))
    }));
    let mut preserving = 0;
    rep.push(Check::over("weakly meet preserving iff ideal-induced", morphisms.iter(), |(n, t, m)| {
        let wmp = check_weakly_meet_preserving(b, t, m).is_ok();
        let induced = check_ideal_induced(b, m).is_ok();
        preserving += usize::from(wmp);
        if wmp == induced {
            Ok(())
        } else {
            Err(format!("into {n}: weakly meet preserving {wmp}, ideal-induced {induced}: {}", m.describe(b, t)))
        }
    }));
    rep.note(format!("{preserving} of {} are weakly meet preserving", morphisms.len()));

    let ideals = all_additive_ideals(b)?;
    rep.push(Check::over("ε_I is a congruence with zero class I", ideals.iter(), |i| check_epsilon_congruence(b, i)));
    rep.push(Check::over("ε_I agrees with its definition by common lower bounds", ideals.iter(), |i| {
        for x in b.elements() {
            for y in b.elements() {
                if epsilon_related(b, i, x, y) != epsilon_related_by_definition(b, i, x, y) {
                    return Err(format!("({}, {}) modulo an ideal of size {}", b.label(x), b.label(y), i.len()));
                }
            }
        }
        Ok(())
    }));
    rep.push(Check::over("natural surjections are weakly meet preserving and ideal-induced", ideals.iter(), |i| {
        let q = quotient_by_ideal(b, i);
        check_weakly_meet_preserving(b, &q.algebra, &q.surjection)?;
        check_ideal_induced(b, &q.surjection)
    }));
    rep.push(Check::over(
        "the ideal generated by a is the least additive ideal containing a",
        b.elements().flat_map(|a| ideals.iter().map(move |i| (a, i))),
        |(a, i)| {
            let g = additive_ideal_generated(b, &[a]);
            if !g.contains(a) {
                return Err(format!("{} not in its own ideal", b.label(a)));
            }
            if i.contains(a) && !g.is_subset(i) {
                return Err(format!("ideal of {} escapes an ideal of size {}", b.label(a), i.len()));
            }
            Ok(())
        },
    ));

    rep.absorb("", ideal_lattice_correspondence(b)?);
    let g = stone_groupoid(b)?;
    for x in invariant_identity_subsets(&g)? {
        rep.absorb(&format!("reduction to {x:?}: "), reduction_quotient_check(&g, &x)?);
    }
    Ok(rep)
}

/// Every identity of the sets `U_a` and `U_{a;…}` on `B(S)`, plus closure of
/// the Cuntz–Krieger ideal under products with basis elements.
pub fn booleanization_suite(name: &str, t: &InverseSemigroupTable) -> Result<CheckReport> {
    let bres = booleanize(t)?;
    let mut rep = CheckReport::new(format!("Booleanization of {name}"));
    rep.absorb("", booleanization_checks(&bres));
    rep.absorb("", ck_product_closure_check(&bres)?);
    rep.note(format!("|B(S)| = {}, {} basis elements indexed", bres.algebra().order(), bres.basis_index.len()));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_suite_passes_on_fixtures() {
        let all = boolean_fixtures().unwrap();
        let targets: Vec<(String, BooleanInvSemigroup)> = all.iter().take(4).cloned().collect();
        let mut both_directions = [false, false];
        for (name, b) in &all {
            let rep = boolean_suite(name, b, &targets).unwrap();
            assert!(rep.passed(), "{name}: {:?}", rep.failures().collect::<Vec<_>>());
            let note = rep.notes.iter().find(|n| n.contains("weakly meet preserving")).unwrap();
            let counts: Vec<usize> = note.split(' ').filter_map(|w| w.parse().ok()).collect();
            both_directions[0] |= counts[0] > 0;
            both_directions[1] |= counts[0] < counts[1];
        }
        assert_eq!(both_directions, [true, true]);
    }

    #[test]
    fn booleanization_suite_passes_on_fixtures() {
        for fx in fixtures::all() {
            let rep = booleanization_suite(fx.name, &fx.table).unwrap();
            assert!(rep.passed(), "{}: {:?}", fx.name, rep.failures().collect::<Vec<_>>());
        }
    }
}
