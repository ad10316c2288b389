//! Covers, proper filters and the filter groupoid, ultrafilters, tight
//! filters and the boundary of a finite inverse semigroup.
//!
//! In a finite inverse semigroup every proper filter is the up-set of its
//! minimum, so a [`Filter`] is stored as that minimum.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Check, CheckReport};
use crate::table::{ElementId, InverseSemigroupTable};

/// Largest principal ideal for which covers are enumerated.
pub const COVER_IDEAL_LIMIT: usize = 20;
/// Largest principal ideal for which every subset is tried against the
/// direct definition.
pub const DIRECT_COVER_LIMIT: usize = 12;

/// A finite subset of `target↓` proposed as a cover of `target`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cover {
    pub target: ElementId,
    pub parts: Vec<ElementId>,
}

impl Cover {
    /// Sorts and checks the parts: non-empty, nonzero, distinct, below target.
    pub fn new(t: &InverseSemigroupTable, target: ElementId, mut parts: Vec<ElementId>) -> Result<Self> {
        parts.sort();
        if parts.is_empty() {
            return Err(Error::Precondition("cover with no parts".into()));
        }
        if parts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition("repeated cover part".into()));
        }
        if parts.iter().any(|p| p.is_zero()) {
            return Err(Error::Precondition("zero as a cover part".into()));
        }
        if let Some(&p) = parts.iter().find(|&&p| !t.leq(p, target)) {
            return Err(Error::not_below(p, target));
        }
        Ok(Cover { target, parts })
    }

    pub fn describe(&self, t: &InverseSemigroupTable) -> String {
        let parts: Vec<&str> = self.parts.iter().map(|&p| t.label(p)).collect();
        format!("{{{}}} -> {}", parts.join(","), t.label(self.target))
    }
}

/// Direct test: every nonzero `x ≤ target` meets some part nontrivially.
pub fn is_cover(t: &InverseSemigroupTable, c: &Cover) -> Result<bool> {
    if let Some(&p) = c.parts.iter().find(|&&p| !t.leq(p, c.target)) {
        return Err(Error::not_below(p, c.target));
    }
    Ok(covers_directly(t, c.target, &c.parts))
}

fn covers_directly(t: &InverseSemigroupTable, target: ElementId, parts: &[ElementId]) -> bool {
    t.down_set(target).iter().filter(|x| !x.is_zero()).all(|&x| {
        parts.iter().any(|&p| {
            let m = t.meet(x, p).expect("elements of a principal ideal are compatible and have meets");
            !m.is_zero()
        })
    })
}

/// Finite-case test: every minimal nonzero element below the target lies
/// below some part.
pub fn is_cover_by_atoms(t: &InverseSemigroupTable, target: ElementId, parts: &[ElementId]) -> bool {
    t.atoms_below(target).iter().all(|&y| parts.iter().any(|&p| t.leq(y, p)))
}

/// The covers of `a` that refine every other cover: each part of the result
/// lies below some part of any given cover. In a finite semigroup this is the
/// single cover by the minimal nonzero elements below `a`.
pub fn minimal_covers(t: &InverseSemigroupTable, a: ElementId) -> Result<Vec<Cover>> {
    if a.is_zero() {
        return Err(Error::Precondition("covers are only taken of nonzero elements".into()));
    }
    Ok(vec![Cover { target: a, parts: t.atoms_below(a) }])
}

/// Covers of `a` with no redundant part (minimal under inclusion), sorted.
pub fn irredundant_covers(t: &InverseSemigroupTable, a: ElementId) -> Result<Vec<Cover>> {
    irredundant_covers_bounded(t, a, COVER_IDEAL_LIMIT)
}

pub fn irredundant_covers_bounded(t: &InverseSemigroupTable, a: ElementId, limit: usize) -> Result<Vec<Cover>> {
    if a.is_zero() {
        return Err(Error::Precondition("covers are only taken of nonzero elements".into()));
    }
    let ideal = t.down_set(a);
    if ideal.len() > limit {
        return Err(Error::bound(format!("principal ideal of {}", t.label(a)), limit));
    }
    let atoms = t.atoms_below(a);
    let candidates: Vec<ElementId> = ideal.iter().copied().filter(|x| !x.is_zero()).collect();
    // which atoms each candidate dominates, as a bit mask over `atoms`
    let reach: Vec<u64> = candidates
        .iter()
        .map(|&c| atoms.iter().enumerate().filter(|(_, &y)| t.leq(y, c)).fold(0u64, |m, (i, _)| m | 1 << i))
        .collect();
    let full: u64 = if atoms.len() == 64 { u64::MAX } else { (1u64 << atoms.len()) - 1 };

    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    fn search(reach: &[u64], full: u64, covered: u64, chosen: &mut Vec<usize>, found: &mut BTreeSet<Vec<usize>>) {
        if covered == full {
            let mut s = chosen.clone();
            s.sort();
            found.insert(s);
            return;
        }
        let first = (!covered & full).trailing_zeros();
        for (i, &r) in reach.iter().enumerate() {
            if r >> first & 1 == 1 && !chosen.contains(&i) {
                chosen.push(i);
                search(reach, full, covered | r, chosen, found);
                chosen.pop();
            }
        }
    }
    search(&reach, full, 0, &mut Vec::new(), &mut found);

    // keep the sets in which every part dominates an atom no other part does
    let mut covers: Vec<Cover> = found
        .into_iter()
        .filter(|set| {
            set.iter().all(|&i| {
                let others = set.iter().filter(|&&j| j != i).fold(0u64, |m, &j| m | reach[j]);
                reach[i] & !others != 0
            })
        })
        .map(|set| Cover { target: a, parts: set.into_iter().map(|i| candidates[i]).collect() })
        .collect();
    covers.sort();
    Ok(covers)
}

/// Every cover of `a` (not only minimal ones), by trying all subsets of the
/// nonzero part of `a↓` against the direct definition.
pub fn all_covers(t: &InverseSemigroupTable, a: ElementId) -> Result<Vec<Cover>> {
    if a.is_zero() {
        return Err(Error::Precondition("covers are only taken of nonzero elements".into()));
    }
    let candidates: Vec<ElementId> = t.down_set(a).iter().copied().filter(|x| !x.is_zero()).collect();
    if candidates.len() + 1 > DIRECT_COVER_LIMIT {
        return Err(Error::bound(format!("principal ideal of {}", t.label(a)), DIRECT_COVER_LIMIT));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << candidates.len()) {
        let parts: Vec<ElementId> =
            (0..candidates.len()).filter(|i| mask >> i & 1 == 1).map(|i| candidates[i]).collect();
        if covers_directly(t, a, &parts) {
            out.push(Cover { target: a, parts });
        }
    }
    out.sort();
    Ok(out)
}

/// Minimal covers of every nonzero element.
pub fn all_minimal_covers(t: &InverseSemigroupTable) -> Result<Vec<Cover>> {
    let mut out = Vec::new();
    for a in t.nonzero() {
        out.extend(minimal_covers(t, a)?);
    }
    Ok(out)
}

/// A proper filter, represented by its minimum element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Filter {
    pub min: ElementId,
}

impl Filter {
    pub fn new(min: ElementId) -> Result<Self> {
        if min.is_zero() {
            return Err(Error::Precondition("a proper filter cannot contain zero".into()));
        }
        Ok(Filter { min })
    }

    pub fn members(&self, t: &InverseSemigroupTable) -> Vec<ElementId> {
        t.up_set(self.min)
    }

    pub fn is_identity(&self, t: &InverseSemigroupTable) -> bool {
        t.is_idempotent(self.min)
    }
}

/// One filter per nonzero element.
pub fn proper_filters(t: &InverseSemigroupTable) -> Vec<Filter> {
    t.nonzero().map(|min| Filter { min }).collect()
}

pub fn filter_contains(t: &InverseSemigroupTable, f: Filter, a: ElementId) -> bool {
    t.leq(f.min, a)
}

pub fn filter_d(t: &InverseSemigroupTable, f: Filter) -> Filter {
    Filter { min: t.d(f.min) }
}

pub fn filter_r(t: &InverseSemigroupTable, f: Filter) -> Filter {
    Filter { min: t.r(f.min) }
}

pub fn filter_inverse(t: &InverseSemigroupTable, f: Filter) -> Filter {
    Filter { min: t.inv(f.min) }
}

/// Groupoid product: defined iff `d(F) = r(G)`, and then `(FG)↑`.
pub fn filter_product(t: &InverseSemigroupTable, f: Filter, g: Filter) -> Option<Filter> {
    (filter_d(t, f) == filter_r(t, g)).then(|| Filter { min: t.mul(f.min, g.min) })
}

/// Enumerates every subset of the semigroup and keeps the zero-free,
/// non-empty, upward closed, downward directed ones. Exponential; used to
/// check the minimum-element representation on small tables.
pub fn filters_by_subset_enumeration(t: &InverseSemigroupTable) -> Result<Vec<Vec<ElementId>>> {
    let nonzero: Vec<ElementId> = t.nonzero().collect();
    if nonzero.len() > 16 {
        return Err(Error::bound("subset enumeration", 16));
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << nonzero.len()) {
        let set: Vec<ElementId> =
            (0..nonzero.len()).filter(|i| mask >> i & 1 == 1).map(|i| nonzero[i]).collect();
        let contains = |x: ElementId| set.contains(&x);
        let upward = set.iter().all(|&a| t.elements().filter(|&b| t.leq(a, b)).all(contains));
        let directed = set
            .iter()
            .all(|&a| set.iter().all(|&b| set.iter().any(|&c| t.leq(c, a) && t.leq(c, b))));
        if upward && directed {
            out.push(set);
        }
    }
    Ok(out)
}

/// Filters whose minimum is a minimal nonzero element.
pub fn ultrafilters(t: &InverseSemigroupTable) -> Vec<Filter> {
    t.atoms().into_iter().map(|min| Filter { min }).collect()
}

/// Ultrafilters found by comparing filters as sets: those strictly contained
/// in no other proper filter.
pub fn ultrafilters_by_maximality(t: &InverseSemigroupTable) -> Vec<Filter> {
    let filters = proper_filters(t);
    let sets: Vec<BTreeSet<ElementId>> = filters.iter().map(|f| f.members(t).into_iter().collect()).collect();
    filters
        .iter()
        .enumerate()
        .filter(|&(i, _)| !sets.iter().enumerate().any(|(j, s)| j != i && s.is_superset(&sets[i]) && s != &sets[i]))
        .map(|(_, &f)| f)
        .collect()
}

/// For each `a ∈ F` and each minimal cover `C → a`, some part of `C` is in `F`.
pub fn is_tight_filter(t: &InverseSemigroupTable, f: Filter) -> Result<bool> {
    for a in f.members(t) {
        for c in minimal_covers(t, a)? {
            if !c.parts.iter().any(|&p| t.leq(f.min, p)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Tightness quantified over every cover, not only minimal ones.
pub fn is_tight_filter_all_covers(t: &InverseSemigroupTable, f: Filter) -> Result<bool> {
    for a in f.members(t) {
        for c in all_covers(t, a)? {
            if !c.parts.iter().any(|&p| t.leq(f.min, p)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn tight_filters(t: &InverseSemigroupTable) -> Result<Vec<Filter>> {
    let mut out = Vec::new();
    for f in proper_filters(t) {
        if is_tight_filter(t, f)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Tight identity filters: the boundary, as a set of identities of the filter
/// groupoid.
pub fn boundary_identities(t: &InverseSemigroupTable) -> Result<Vec<Filter>> {
    Ok(tight_filters(t)?.into_iter().filter(|f| f.is_identity(t)).collect())
}

/// The boundary computed on the semilattice of idempotents alone: filters of
/// E(S) that meet every cover, inside E(S), of each of their members.
pub fn boundary_on_idempotents(t: &InverseSemigroupTable) -> Vec<ElementId> {
    let idem = t.idempotents();
    idem.iter()
        .copied()
        .filter(|e| !e.is_zero())
        .filter(|&e| {
            idem.iter().filter(|&&a| t.leq(e, a)).all(|&a| {
                let below: Vec<ElementId> = idem.iter().copied().filter(|&x| !x.is_zero() && t.leq(x, a)).collect();
                let atoms: Vec<ElementId> = below
                    .iter()
                    .copied()
                    .filter(|&x| !below.iter().any(|&y| y != x && t.leq(y, x)))
                    .collect();
                // minimal covers inside E(S) of `a` omitting e↑: a cover avoiding
                // the filter exists iff the parts not above e still dominate all
                // atoms below a
                let avoiding: Vec<ElementId> = below.iter().copied().filter(|&p| !t.leq(e, p)).collect();
                !atoms.iter().all(|&y| avoiding.iter().any(|&p| t.leq(y, p)))
            })
        })
        .collect()
}

/// Exhaustive checks of the standard ultrafilter and tight-filter facts.
pub fn filter_property_checks(t: &InverseSemigroupTable) -> Result<CheckReport> {
    let mut rep = CheckReport::new("ultrafilter and tight filter properties");
    let filters = proper_filters(t);
    let ultra: BTreeSet<Filter> = ultrafilters_by_maximality(t).into_iter().collect();
    let is_ultra = |f: Filter| ultra.contains(&f);

    rep.push(Check::over("ultra(A) <=> ultra(d A) <=> ultra(r A)", filters.iter().copied(), |f| {
        let (a, d, r) = (is_ultra(f), is_ultra(filter_d(t, f)), is_ultra(filter_r(t, f)));
        if a == d && d == r {
            Ok(())
        } else {
            Err(format!("filter {}↑: ultra {a}, d ultra {d}, r ultra {r}", t.label(f.min)))
        }
    }));

    // ultrafilters of E(S) computed inside the semilattice itself
    let idem: Vec<ElementId> = t.idempotents().into_iter().filter(|e| !e.is_zero()).collect();
    let e_filters: Vec<BTreeSet<ElementId>> =
        idem.iter().map(|&e| idem.iter().copied().filter(|&x| t.leq(e, x)).collect()).collect();
    let e_ultra: Vec<usize> = (0..idem.len())
        .filter(|&i| !e_filters.iter().enumerate().any(|(j, s)| j != i && s.is_superset(&e_filters[i]) && s != &e_filters[i]))
        .collect();
    let idem_ultra: Vec<Filter> = ultra.iter().copied().filter(|f| f.is_identity(t)).collect();
    let forward: BTreeSet<BTreeSet<ElementId>> = idem_ultra
        .iter()
        .map(|f| f.members(t).into_iter().filter(|&x| t.is_idempotent(x)).collect())
        .collect();
    let backward: BTreeSet<BTreeSet<ElementId>> = e_ultra
        .iter()
        .map(|&i| {
            let min = idem[i];
            t.up_set(min).into_iter().collect::<BTreeSet<_>>()
        })
        .collect();
    let idem_ultra_sets: BTreeSet<BTreeSet<ElementId>> =
        idem_ultra.iter().map(|f| f.members(t).into_iter().collect()).collect();
    let e_ultra_sets: BTreeSet<BTreeSet<ElementId>> = e_ultra.iter().map(|&i| e_filters[i].clone()).collect();
    rep.push(Check::single(
        "idempotent ultrafilters of S biject with ultrafilters of E(S)",
        forward == e_ultra_sets && backward == idem_ultra_sets && idem_ultra.len() == e_ultra.len(),
        || format!("{} idempotent ultrafilters vs {} ultrafilters of E(S)", idem_ultra.len(), e_ultra.len()),
    ));

    rep.push(Check::over("ultrafilters of E(S) are exactly the filters passing the meet criterion", 0..idem.len(), |i| {
        let criterion = idem.iter().all(|&f| {
            let meets_all = e_filters[i].iter().all(|&a| !t.mul(f, a).is_zero());
            !meets_all || e_filters[i].contains(&f)
        });
        let maximal = e_ultra.contains(&i);
        if criterion == maximal {
            Ok(())
        } else {
            Err(format!("filter {}↑ in E(S): maximal {maximal}, criterion {criterion}", t.label(idem[i])))
        }
    }));

    let tight: BTreeSet<Filter> = tight_filters(t)?.into_iter().collect();
    rep.push(Check::over("tight(A) <=> tight(d A) <=> tight(r A)", filters.iter().copied(), |f| {
        let (a, d, r) = (tight.contains(&f), tight.contains(&filter_d(t, f)), tight.contains(&filter_r(t, f)));
        if a == d && d == r {
            Ok(())
        } else {
            Err(format!("filter {}↑: tight {a}, d tight {d}, r tight {r}", t.label(f.min)))
        }
    }));

    rep.push(Check::over("every ultrafilter is tight", ultra.iter().copied(), |f| {
        if tight.contains(&f) {
            Ok(())
        } else {
            Err(format!("ultrafilter {}↑ is not tight", t.label(f.min)))
        }
    }));

    let boundary: Vec<ElementId> = boundary_identities(t)?.iter().map(|f| f.min).collect();
    let on_e = boundary_on_idempotents(t);
    rep.push(Check::single("boundary from filters of S equals boundary from filters of E(S)", boundary == on_e, || {
        format!("{boundary:?} vs {on_e:?}")
    }));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn mins(fs: &[Filter]) -> Vec<ElementId> {
        fs.iter().map(|f| f.min).collect()
    }

    #[test]
    fn cover_examples() {
        let c = fixtures::chain3();
        let (e, f) = (c.id("e"), c.id("f"));
        assert!(is_cover(&c, &Cover::new(&c, e, vec![f]).unwrap()).unwrap());
        let sl = fixtures::sl22();
        assert!(!is_cover(&sl, &Cover::new(&sl, sl.id("1"), vec![sl.id("a")]).unwrap()).unwrap());
        for fx in fixtures::all() {
            let t = &fx.table;
            for a in t.nonzero() {
                assert!(is_cover(t, &Cover::new(t, a, vec![a]).unwrap()).unwrap());
            }
        }
    }

    #[test]
    fn malformed_cover_is_a_precondition_error() {
        let c = fixtures::chain3();
        assert!(matches!(Cover::new(&c, c.id("f"), vec![c.id("e")]), Err(Error::Precondition(_))));
        let bad = Cover { target: c.id("f"), parts: vec![c.id("e")] };
        assert!(matches!(is_cover(&c, &bad), Err(Error::Precondition(_))));
    }

    #[test]
    fn minimal_cover_examples() {
        let c = fixtures::chain3();
        assert_eq!(minimal_covers(&c, c.id("e")).unwrap(), vec![Cover { target: c.id("e"), parts: vec![c.id("f")] }]);
        let sl = fixtures::sl22();
        let one = sl.id("1");
        assert_eq!(minimal_covers(&sl, one).unwrap(), vec![Cover { target: one, parts: vec![sl.id("a"), sl.id("b")] }]);
        let b2 = fixtures::b2();
        let e11 = b2.id("e11");
        assert_eq!(minimal_covers(&b2, e11).unwrap(), vec![Cover { target: e11, parts: vec![e11] }]);
        assert!(minimal_covers(&c, ElementId::ZERO).is_err());
        let trivial_and_atom = irredundant_covers(&c, c.id("e")).unwrap();
        assert_eq!(trivial_and_atom.len(), 2);
        assert_eq!(irredundant_covers(&sl, one).unwrap().len(), 2);
    }

    #[test]
    fn atom_criterion_matches_direct_definition() {
        let mut tables: Vec<InverseSemigroupTable> = fixtures::all().into_iter().map(|f| f.table).collect();
        tables.extend(fixtures::random_sweep(100, 25, 12).into_iter().map(|r| r.table));
        for t in &tables {
            for a in t.nonzero() {
                let cands: Vec<ElementId> = t.down_set(a).iter().copied().filter(|x| !x.is_zero()).collect();
                for mask in 1u32..(1 << cands.len()) {
                    let parts: Vec<ElementId> =
                        (0..cands.len()).filter(|i| mask >> i & 1 == 1).map(|i| cands[i]).collect();
                    assert_eq!(covers_directly(t, a, &parts), is_cover_by_atoms(t, a, &parts));
                }
                let all = all_covers(t, a).unwrap();
                let irredundant: Vec<Cover> = all
                    .iter()
                    .filter(|c| {
                        !all.iter().any(|d| d.parts.len() < c.parts.len() && d.parts.iter().all(|p| c.parts.contains(p)))
                    })
                    .cloned()
                    .collect();
                assert_eq!(irredundant, irredundant_covers(t, a).unwrap());
                // covers refining every cover, smallest such part sets
                let refines = |c: &Cover, d: &Cover| c.parts.iter().all(|&p| d.parts.iter().any(|&q| t.leq(p, q)));
                let finest: Vec<Cover> = all.iter().filter(|c| all.iter().all(|d| refines(c, d))).cloned().collect();
                let smallest = finest.iter().map(|c| c.parts.len()).min().unwrap();
                let finest: Vec<Cover> = finest.into_iter().filter(|c| c.parts.len() == smallest).collect();
                assert_eq!(finest, minimal_covers(t, a).unwrap());
            }
        }
    }

    #[test]
    fn filter_examples() {
        let c = fixtures::chain3();
        let (e, f) = (c.id("e"), c.id("f"));
        assert_eq!(mins(&proper_filters(&c)), vec![f, e]);
        assert!(filter_contains(&c, Filter { min: f }, e));
        assert_eq!(filter_product(&c, Filter { min: e }, Filter { min: f }), None);
        assert_eq!(proper_filters(&fixtures::b2()).len(), 4);
        assert!(proper_filters(&fixtures::trivial()).is_empty());

        let b2 = fixtures::b2();
        let p = filter_product(&b2, Filter { min: b2.id("e12") }, Filter { min: b2.id("e21") });
        assert_eq!(p, Some(Filter { min: b2.id("e11") }));
        for t in fixtures::all() {
            for fl in proper_filters(&t.table).into_iter().filter(|f| f.is_identity(&t.table)) {
                assert_eq!(filter_product(&t.table, fl, fl), Some(fl));
            }
        }
    }

    #[test]
    fn filters_are_principal_up_sets() {
        for fx in fixtures::all() {
            let t = &fx.table;
            let mut by_min: Vec<Vec<ElementId>> = proper_filters(t).iter().map(|f| f.members(t)).collect();
            let mut enumerated = filters_by_subset_enumeration(t).unwrap();
            by_min.sort();
            enumerated.sort();
            assert_eq!(by_min, enumerated, "{}", fx.name);
        }
    }

    #[test]
    fn filter_product_is_the_upward_closure_of_the_set_product() {
        for fx in fixtures::all() {
            let t = &fx.table;
            for f in proper_filters(t) {
                for g in proper_filters(t) {
                    if let Some(h) = filter_product(t, f, g) {
                        let mut prod: BTreeSet<ElementId> = BTreeSet::new();
                        for a in f.members(t) {
                            for b in g.members(t) {
                                prod.extend(t.up_set(t.mul(a, b)));
                            }
                        }
                        assert_eq!(prod.into_iter().collect::<Vec<_>>(), h.members(t));
                    }
                }
            }
        }
    }

    #[test]
    fn filter_groupoid_laws() {
        for fx in fixtures::all() {
            let t = &fx.table;
            let fs = proper_filters(t);
            for &f in &fs {
                let fi = filter_inverse(t, f);
                assert_eq!(filter_product(t, fi, f), Some(filter_d(t, f)));
                assert_eq!(filter_product(t, f, fi), Some(filter_r(t, f)));
                assert_eq!(filter_product(t, f, filter_d(t, f)), Some(f));
                assert_eq!(filter_product(t, filter_r(t, f), f), Some(f));
                for &g in &fs {
                    for &h in &fs {
                        if let (Some(fg), Some(gh)) = (filter_product(t, f, g), filter_product(t, g, h)) {
                            assert_eq!(filter_product(t, fg, h), filter_product(t, f, gh));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ultrafilter_examples() {
        let c = fixtures::chain3();
        assert_eq!(mins(&ultrafilters(&c)), vec![c.id("f")]);
        let i2 = fixtures::i2();
        let u = ultrafilters(&i2);
        assert_eq!(u.len(), 4);
        assert!(u.iter().all(|f| ["1>1", "1>2", "2>1", "2>2"].contains(&i2.label(f.min))));
        assert_eq!(ultrafilters(&fixtures::b2()).len(), 4);
        for fx in fixtures::all() {
            assert_eq!(ultrafilters(&fx.table), ultrafilters_by_maximality(&fx.table));
        }
    }

    #[test]
    fn tight_examples() {
        let c = fixtures::chain3();
        assert!(!is_tight_filter(&c, Filter { min: c.id("e") }).unwrap());
        assert!(is_tight_filter(&c, Filter { min: c.id("f") }).unwrap());
        for fx in fixtures::all() {
            for u in ultrafilters(&fx.table) {
                assert!(is_tight_filter(&fx.table, u).unwrap());
            }
        }
    }

    #[test]
    fn minimal_covers_suffice_for_tightness() {
        let mut tables: Vec<InverseSemigroupTable> = fixtures::all().into_iter().map(|f| f.table).collect();
        tables.extend(fixtures::random_sweep(7, 25, 12).into_iter().map(|r| r.table));
        for t in &tables {
            for f in proper_filters(t) {
                assert_eq!(is_tight_filter(t, f).unwrap(), is_tight_filter_all_covers(t, f).unwrap());
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let c = fixtures::chain3();
        assert_eq!(mins(&boundary_identities(&c).unwrap()), vec![c.id("f")]);
        let b2 = fixtures::b2();
        assert_eq!(mins(&boundary_identities(&b2).unwrap()), vec![b2.id("e11"), b2.id("e22")]);
        let sl = fixtures::sl22();
        assert_eq!(mins(&boundary_identities(&sl).unwrap()), vec![sl.id("a"), sl.id("b")]);
    }

    #[test]
    fn boundary_is_invariant() {
        for fx in fixtures::all() {
            let t = &fx.table;
            let boundary: BTreeSet<Filter> = boundary_identities(t).unwrap().into_iter().collect();
            for f in proper_filters(t) {
                assert_eq!(boundary.contains(&filter_d(t, f)), boundary.contains(&filter_r(t, f)));
            }
        }
    }

    #[test]
    fn filter_properties_hold_on_fixtures() {
        for fx in fixtures::all() {
            let rep = filter_property_checks(&fx.table).unwrap();
            assert!(rep.passed(), "{}: {:?}", fx.name, rep.failures().collect::<Vec<_>>());
        }
    }
}
