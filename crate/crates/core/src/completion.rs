//! The Booleanization `B(S)` as the bisection algebra of the filter groupoid,
//! the Cuntz–Krieger ideal, the Exel completion `T(S)` by quotient and by
//! restriction to the tight groupoid, and checks of the universal properties.
//!
//! Arrow `i` of the filter groupoid is the filter whose minimum is element
//! `i + 1`; `U_a` is the set of filters containing `a`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::boolean::{
    additive_ideal_generated, check_additive, check_cover_to_join, check_homomorphism, enumerate_morphisms,
    enumerate_morphisms_with, quotient_by_ideal, AdditiveIdeal, BooleanInvSemigroup, EnumerationLimits,
    MorphismKind, MorphismTable,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::filters::{
    all_covers, boundary_identities, boundary_on_idempotents, irredundant_covers, is_cover_by_atoms,
    minimal_covers, Cover, Filter, DIRECT_COVER_LIMIT,
};
use crate::groupoid::{all_bisections, restriction_morphism, universal_groupoid, BisectionAlgebra, BisectionLimits};
use crate::report::{Check, CheckReport};
use crate::table::{ElementId, InverseSemigroupTable};

/// Basis enumeration tries every subset of `a↓ \ {0, a}` up to this size;
/// above it only subsets of at most two parts are indexed.
pub const BASIS_PARTS_LIMIT: usize = 10;

/// Limits used by the universal-property checks.
pub const FACTORISATION_LIMITS: EnumerationLimits = EnumerationLimits { source: 16, target: 32 };

/// `(a; a₁, …, aₘ)`, naming `U_a \ (U_{a₁} ∪ … ∪ U_{aₘ})`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisKey {
    pub target: ElementId,
    pub parts: Vec<ElementId>,
}

impl BasisKey {
    pub fn describe(&self, t: &InverseSemigroupTable) -> String {
        if self.parts.is_empty() {
            return format!("U_{}", t.label(self.target));
        }
        let parts: Vec<&str> = self.parts.iter().map(|&p| t.label(p)).collect();
        format!("U_{{{};{}}}", t.label(self.target), parts.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct BooleanizationResult {
    pub source: InverseSemigroupTable,
    pub algebra: BisectionAlgebra,
    /// `a ↦ U_a`.
    pub beta: MorphismTable,
    pub basis_index: BTreeMap<BasisKey, ElementId>,
    /// False when some principal ideal was too large to index every subset.
    pub basis_complete: bool,
}

/// Filters containing `a`, as an arrow mask of the filter groupoid.
pub fn u_mask(t: &InverseSemigroupTable, a: ElementId) -> u64 {
    t.nonzero().filter(|&m| t.leq(m, a)).fold(0u64, |acc, m| acc | 1 << (m.index() - 1))
}

fn u_minus_mask(t: &InverseSemigroupTable, a: ElementId, parts: &[ElementId]) -> u64 {
    parts.iter().fold(u_mask(t, a), |acc, &p| acc & !u_mask(t, p))
}

impl BooleanizationResult {
    pub fn source(&self) -> &InverseSemigroupTable {
        &self.source
    }

    pub fn algebra(&self) -> &BooleanInvSemigroup {
        self.algebra.algebra()
    }

    /// `U_a`.
    pub fn u_set(&self, a: ElementId) -> ElementId {
        self.beta.apply(a)
    }

    /// `U_{a; parts}`; every part must lie below `a`.
    pub fn u_minus_set(&self, a: ElementId, parts: &[ElementId]) -> Result<ElementId> {
        if let Some(&p) = parts.iter().find(|&&p| !self.source.leq(p, a)) {
            return Err(Error::not_below(p, a));
        }
        Ok(self.algebra.element(u_minus_mask(&self.source, a, parts)).expect("a subset of U_a is a bisection"))
    }

    /// The filter `a↑` as an element, i.e. the singleton bisection.
    pub fn point(&self, a: ElementId) -> ElementId {
        self.algebra.singleton(a.index() - 1)
    }

    /// Elements of `S` whose filters make up the bisection `e`.
    pub fn points_of(&self, e: ElementId) -> Vec<ElementId> {
        self.algebra.arrows(e).into_iter().map(|i| ElementId::from(i + 1)).collect()
    }

    /// Renders an element as the set of filters, each named by its minimum.
    pub fn describe(&self, e: ElementId) -> String {
        let parts: Vec<String> = self.points_of(e).iter().map(|&a| format!("{}↑", self.source.label(a))).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// `B(S)`: every partial bisection of the filter groupoid, with `β` and the
/// index of basis elements `U_{a; a₁, …, aₘ}`.
pub fn booleanize(t: &InverseSemigroupTable) -> Result<BooleanizationResult> {
    let g = universal_groupoid(t)?;
    let algebra = all_bisections(&g, BisectionLimits::default())?;
    let beta = MorphismTable::new(
        t.elements().map(|a| algebra.element(u_mask(t, a)).expect("U_a is a partial bisection")).collect(),
    );
    let mut basis_index = BTreeMap::new();
    let mut basis_complete = true;
    for a in t.nonzero() {
        let strict: Vec<ElementId> = t.down_set(a).iter().copied().filter(|&x| !x.is_zero() && x != a).collect();
        let full = strict.len() <= BASIS_PARTS_LIMIT;
        basis_complete &= full;
        for mask in 0u32..(1 << strict.len().min(BASIS_PARTS_LIMIT)) {
            if !full && mask.count_ones() > 2 {
                continue;
            }
            let parts: Vec<ElementId> = (0..strict.len()).filter(|i| mask >> i & 1 == 1).map(|i| strict[i]).collect();
            let e = algebra.element(u_minus_mask(t, a, &parts)).expect("a subset of U_a is a bisection");
            basis_index.insert(BasisKey { target: a, parts }, e);
        }
        if !full {
            for i in 0..strict.len() {
                for j in i..strict.len() {
                    let mut parts = vec![strict[i], strict[j]];
                    parts.dedup();
                    let e = algebra.element(u_minus_mask(t, a, &parts)).unwrap();
                    basis_index.insert(BasisKey { target: a, parts }, e);
                }
            }
        }
    }
    Ok(BooleanizationResult { source: t.clone(), algebra, beta, basis_index, basis_complete })
}

/// Closure of `xs ∪ {0}` under binary compatible joins.
fn join_closure(b: &BooleanInvSemigroup, xs: &[ElementId]) -> BTreeSet<ElementId> {
    let mut have: BTreeSet<ElementId> = xs.iter().copied().collect();
    have.insert(ElementId::ZERO);
    let mut frontier: Vec<ElementId> = have.iter().copied().collect();
    while let Some(x) = frontier.pop() {
        let current: Vec<ElementId> = have.iter().copied().collect();
        for y in current {
            if let Some(j) = b.join(x, y) {
                if have.insert(j) {
                    frontier.push(j);
                }
            }
        }
    }
    have
}

/// Identities of the sets `U_a`: `U_0 = ∅`, injectivity, inverses,
/// products, bisection property and meets for `U_a`; the inverse and product
/// laws for `U_{a; …}`; and generation of the algebra by compatible unions of
/// basis elements.
pub fn booleanization_checks(bres: &BooleanizationResult) -> CheckReport {
    let t = &bres.source;
    let b = bres.algebra();
    let u = |a: ElementId| bres.u_set(a);
    let pairs: Vec<(ElementId, ElementId)> = t.elements().flat_map(|a| t.elements().map(move |c| (a, c))).collect();
    let mut rep = CheckReport::new(format!("Booleanization of a semigroup of order {}", t.order()));

    rep.push(Check::single("U_0 = ∅", u(ElementId::ZERO).is_zero(), || "U_0 is not empty".into()));
    rep.push(Check::single("U_a = U_b only if a = b", bres.beta.is_injective(), || "β is not injective".into()));
    rep.push(Check::over("U_a⁻¹ = U_{a⁻¹}", t.elements(), |a| {
        if b.inv(u(a)) == u(t.inv(a)) {
            Ok(())
        } else {
            Err(t.label(a).to_string())
        }
    }));
    rep.push(Check::over("U_a U_b = U_{ab}", pairs.iter().copied(), |(x, y)| {
        if b.mul(u(x), u(y)) == u(t.mul(x, y)) {
            Ok(())
        } else {
            Err(format!("a = {}, b = {}", t.label(x), t.label(y)))
        }
    }));
    rep.push(Check::over("U_a is a partial bisection", t.elements(), |a| {
        let arrows = bres.algebra.arrows(u(a));
        let g = bres.algebra.groupoid();
        let distinct = |f: &dyn Fn(usize) -> usize| arrows.iter().map(|&x| f(x)).collect::<BTreeSet<_>>().len() == arrows.len();
        if distinct(&|x| g.d(x)) && distinct(&|x| g.r(x)) {
            Ok(())
        } else {
            Err(t.label(a).to_string())
        }
    }));
    rep.push(Check::over("U_a ∩ U_b = ⋃_{x ≤ a,b} U_x", pairs.iter().copied(), |(x, y)| {
        let union = t
            .down_set(x)
            .iter()
            .filter(|&&z| t.leq(z, y))
            .fold(0u64, |acc, &z| acc | bres.algebra.mask(u(z)));
        if bres.algebra.mask(u(x)) & bres.algebra.mask(u(y)) == union {
            Ok(())
        } else {
            Err(format!("a = {}, b = {}", t.label(x), t.label(y)))
        }
    }));

    let keys: Vec<(&BasisKey, &ElementId)> = bres.basis_index.iter().collect();
    rep.push(Check::over("U_{a;a₁…}⁻¹ = U_{a⁻¹;a₁⁻¹…}", keys.iter(), |(k, &e)| {
        let parts: Vec<ElementId> = k.parts.iter().map(|&p| t.inv(p)).collect();
        if b.inv(e) == bres.u_minus_set(t.inv(k.target), &parts).unwrap() {
            Ok(())
        } else {
            Err(k.describe(t))
        }
    }));
    // products over every pair of indexed keys, or single-part keys on large indexes
    let product_keys: Vec<(&BasisKey, &ElementId)> = if keys.len() <= 256 {
        keys.clone()
    } else {
        rep.note(format!("basis product law checked on keys with at most one part ({} keys indexed)", keys.len()));
        keys.iter().copied().filter(|(k, _)| k.parts.len() <= 1).collect()
    };
    let house = exec::find_map_first(product_keys.len(), |i| {
        let (k1, &e1) = product_keys[i];
        for &(k2, &e2) in &product_keys {
            let ab = t.mul(k1.target, k2.target);
            let mut parts: Vec<ElementId> = k2.parts.iter().map(|&q| t.mul(k1.target, q)).collect();
            parts.extend(k1.parts.iter().map(|&p| t.mul(p, k2.target)));
            let expected = bres.algebra.element(u_minus_mask(t, ab, &parts)).unwrap();
            if b.mul(e1, e2) != expected {
                return Some(format!("{} · {}", k1.describe(t), k2.describe(t)));
            }
        }
        None
    });
    rep.push(Check::new(
        "U_{a;a₁…} U_{b;b₁…} = U_{ab; ab₁…, a₁b…}",
        product_keys.len() * product_keys.len(),
        house,
    ));

    rep.push(Check::over("each filter a↑ is U_{a; a↓ \\ {a}}", t.nonzero(), |a| {
        let strict: Vec<ElementId> = t.down_set(a).iter().copied().filter(|&x| x != a).collect();
        if bres.u_minus_set(a, &strict).unwrap() == bres.point(a) {
            Ok(())
        } else {
            Err(t.label(a).to_string())
        }
    }));
    let basis: Vec<ElementId> = bres.basis_index.values().copied().collect();
    let closure = join_closure(b, &basis);
    rep.push(Check::single(
        "compatible unions of basis elements give every bisection",
        closure.len() == b.order(),
        || format!("{} of {} bisections reached", closure.len(), b.order()),
    ));
    rep
}

fn checked_covers(t: &InverseSemigroupTable, a: ElementId) -> Result<Vec<Cover>> {
    if t.down_set(a).len() <= DIRECT_COVER_LIMIT {
        all_covers(t, a)
    } else {
        irredundant_covers(t, a)
    }
}

/// `U_{a;C}` for each minimal cover `C` of each nonzero `a`.
pub fn ck_generators(bres: &BooleanizationResult) -> Result<Vec<ElementId>> {
    let t = &bres.source;
    let mut out = BTreeSet::new();
    for a in t.nonzero() {
        for c in minimal_covers(t, a)? {
            out.insert(bres.u_minus_set(a, &c.parts)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// The Cuntz–Krieger ideal: the additive ideal generated by `U_{a;C}` over
/// minimal covers.
pub fn ck_ideal(bres: &BooleanizationResult) -> Result<AdditiveIdeal> {
    Ok(additive_ideal_generated(bres.algebra(), &ck_generators(bres)?))
}

/// As [`ck_ideal`], quantifying over every cover instead of minimal ones.
pub fn ck_ideal_all_covers(bres: &BooleanizationResult) -> Result<AdditiveIdeal> {
    let t = &bres.source;
    let mut gens = Vec::new();
    for a in t.nonzero() {
        for c in checked_covers(t, a)? {
            gens.push(bres.u_minus_set(a, &c.parts)?);
        }
    }
    Ok(additive_ideal_generated(bres.algebra(), &gens))
}

/// Generated by `β(a) \ (β(a₁) ∨ … ∨ β(aₘ))`, computed with the algebra's
/// own join and difference.
pub fn ck_ideal_by_complements(bres: &BooleanizationResult) -> Result<AdditiveIdeal> {
    let t = &bres.source;
    let b = bres.algebra();
    let mut gens = Vec::new();
    for a in t.nonzero() {
        for c in checked_covers(t, a)? {
            let images: Vec<ElementId> = c.parts.iter().map(|&p| bres.u_set(p)).collect();
            let j = b.join_all(&images).ok_or_else(|| Error::Axiom("images of a cover are not compatible".into()))?;
            gens.push(b.relative_complement(bres.u_set(a), j)?);
        }
    }
    Ok(additive_ideal_generated(b, &gens))
}

/// Closure under compatible joins of `U_{a;C}` over every cover, without any
/// ideal closure.
pub fn cover_defect_join_closure(bres: &BooleanizationResult) -> Result<Vec<ElementId>> {
    let t = &bres.source;
    let mut gens = Vec::new();
    for a in t.nonzero() {
        for c in checked_covers(t, a)? {
            gens.push(bres.u_minus_set(a, &c.parts)?);
        }
    }
    Ok(join_closure(bres.algebra(), &gens).into_iter().collect())
}

/// Every route to the Cuntz–Krieger ideal agrees.
pub fn ck_ideal_checks(bres: &BooleanizationResult) -> Result<CheckReport> {
    let base = ck_ideal(bres)?;
    let mut rep = CheckReport::new("Cuntz–Krieger ideal");
    let same = |name: &str, other: &[ElementId]| {
        Check::single(name, base.members() == other, || format!("{} against {} elements", base.len(), other.len()))
    };
    rep.push(same("minimal covers generate the same ideal as all covers", ck_ideal_all_covers(bres)?.members()));
    rep.push(same("relative complements in B(S) generate the same ideal", ck_ideal_by_complements(bres)?.members()));
    rep.push(same("join closure of the cover defects is the ideal", &cover_defect_join_closure(bres)?));
    Ok(rep)
}

/// Products of each cover defect `U_{a;C}` with each basis element, on both
/// sides, lie in the Cuntz–Krieger ideal.
pub fn ck_product_closure_check(bres: &BooleanizationResult) -> Result<CheckReport> {
    let t = &bres.source;
    let b = bres.algebra();
    let ideal = ck_ideal(bres)?;
    let mut gens: Vec<(String, ElementId)> = Vec::new();
    for a in t.nonzero() {
        for c in checked_covers(t, a)? {
            let key = BasisKey { target: a, parts: c.parts.clone() };
            gens.push((key.describe(t), bres.u_minus_set(a, &c.parts)?));
        }
    }
    let basis: Vec<(&BasisKey, &ElementId)> = bres.basis_index.iter().collect();
    let mut rep = CheckReport::new("products of cover defects with basis elements");
    let witness = exec::find_map_first(gens.len(), |i| {
        let (name, g) = &gens[i];
        basis.iter().find_map(|&(k, &e)| {
            (!ideal.contains(b.mul(*g, e)) || !ideal.contains(b.mul(e, *g))).then(|| format!("{name} with {}", k.describe(t)))
        })
    });
    rep.push(Check::new("every product lies in the ideal", gens.len() * basis.len(), witness));
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Quotient,
    TightRestriction,
}

#[derive(Debug, Clone)]
pub struct CompletionResult {
    pub route: Route,
    pub algebra: BooleanInvSemigroup,
    pub tau: MorphismTable,
    pub ck_ideal: AdditiveIdeal,
    /// `B(S) → algebra`: the natural surjection, or `A ↦ A ∩ G_t`.
    pub from_booleanization: MorphismTable,
    pub booleanization: BooleanizationResult,
    /// Tight identity filters.
    pub boundary: Vec<Filter>,
}

/// `T(S) = B(S)/I` with `τ = ν ∘ β`.
pub fn exel_completion(t: &InverseSemigroupTable) -> Result<CompletionResult> {
    exel_completion_of(booleanize(t)?)
}

pub fn exel_completion_of(bres: BooleanizationResult) -> Result<CompletionResult> {
    let ideal = ck_ideal(&bres)?;
    let q = quotient_by_ideal(bres.algebra(), &ideal);
    let tau = bres.beta.then(&q.surjection);
    let boundary = boundary_identities(&bres.source)?;
    Ok(CompletionResult {
        route: Route::Quotient,
        algebra: q.algebra,
        tau,
        ck_ideal: ideal,
        from_booleanization: q.surjection,
        booleanization: bres,
        boundary,
    })
}

/// `KB(G_t(S))`, where `G_t` is the filter groupoid reduced to the tight
/// identity filters, with `τ = η: a ↦ U_a ∩ G_t`.
pub fn exel_via_tight_groupoid(t: &InverseSemigroupTable) -> Result<CompletionResult> {
    exel_via_tight_groupoid_of(booleanize(t)?)
}

pub fn exel_via_tight_groupoid_of(bres: BooleanizationResult) -> Result<CompletionResult> {
    let boundary = boundary_identities(&bres.source)?;
    let ids: Vec<usize> = boundary.iter().map(|f| f.min.index() - 1).collect();
    let rest = restriction_morphism(&bres.algebra, &ids, BisectionLimits::default())?;
    let tau = bres.beta.then(&rest.morphism);
    let ideal = ck_ideal(&bres)?;
    Ok(CompletionResult {
        route: Route::TightRestriction,
        algebra: rest.algebra.into_algebra(),
        tau,
        ck_ideal: ideal,
        from_booleanization: rest.morphism,
        booleanization: bres,
        boundary,
    })
}

/// Both constructions of the Exel completion agree: `[A] ↦ A ∩ G_t` is a
/// well-defined isomorphism carrying one `τ` to the other, and the kernel of
/// the restriction is the Cuntz–Krieger ideal.
pub fn completion_routes_check(t: &InverseSemigroupTable) -> Result<CheckReport> {
    let bres = booleanize(t)?;
    let quotient = exel_completion_of(bres.clone())?;
    let tight = exel_via_tight_groupoid_of(bres)?;
    let bres = &quotient.booleanization;
    let b = bres.algebra();
    let nu = &quotient.from_booleanization;
    let restrict = &tight.from_booleanization;
    let mut rep = CheckReport::new(format!("quotient and tight-groupoid completions of a semigroup of order {}", t.order()));

    let ids: Vec<usize> = tight.boundary.iter().map(|f| f.min.index() - 1).collect();
    rep.push(Check::single(
        "boundary is invariant",
        bres.algebra.groupoid().is_invariant_subset(&ids),
        || "boundary is not invariant".into(),
    ));
    let by_idempotents: Vec<ElementId> = boundary_on_idempotents(t);
    let tight_mins: Vec<ElementId> = tight.boundary.iter().map(|f| f.min).collect();
    rep.push(Check::single("tight identity filters match the boundary computed on E(S)", by_idempotents == tight_mins, || {
        format!("{tight_mins:?} against {by_idempotents:?}")
    }));

    let k = quotient.algebra.order();
    let reps: Vec<ElementId> =
        (0..k).map(|c| b.elements().find(|&a| nu.apply(a).index() == c).expect("ν is surjective")).collect();
    rep.push(Check::over("[A] ↦ A ∩ G_t is well defined", b.elements(), |a| {
        if restrict.apply(a) == restrict.apply(reps[nu.apply(a).index()]) {
            Ok(())
        } else {
            Err(bres.describe(a))
        }
    }));
    let canonical = MorphismTable::new(reps.iter().map(|&r| restrict.apply(r)).collect());
    rep.push(Check::single(
        "[A] ↦ A ∩ G_t is bijective",
        canonical.is_injective() && canonical.is_surjective(tight.algebra.order()),
        || format!("orders {} and {}", k, tight.algebra.order()),
    ));
    let hom = check_homomorphism(&quotient.algebra, &tight.algebra, &canonical, false);
    rep.push(Check::single("[A] ↦ A ∩ G_t is multiplicative", hom.is_ok(), || hom.clone().unwrap_err()));
    let add = check_additive(&quotient.algebra, &tight.algebra, &canonical);
    rep.push(Check::single("[A] ↦ A ∩ G_t preserves joins", add.is_ok(), || add.clone().unwrap_err()));
    rep.push(Check::over("the two τ maps correspond", t.elements(), |a| {
        if canonical.apply(quotient.tau.apply(a)) == tight.tau.apply(a) {
            Ok(())
        } else {
            Err(t.label(a).to_string())
        }
    }));
    let kernel = restrict.kernel();
    rep.push(Check::single("kernel of the restriction is the Cuntz–Krieger ideal", kernel == quotient.ck_ideal.members(), || {
        let extra: Vec<String> = kernel.iter().filter(|&&x| !quotient.ck_ideal.contains(x)).map(|&x| bres.describe(x)).collect();
        format!("kernel {} elements, ideal {}; kernel only: {}", kernel.len(), quotient.ck_ideal.len(), extra.join(" "))
    }));
    rep.push(Check::over("U_{a;C} misses G_t exactly when C covers a", bres.basis_index.iter(), |(key, &e)| {
        let misses = restrict.apply(e).is_zero();
        if misses == is_cover_by_atoms(t, key.target, &key.parts) {
            Ok(())
        } else {
            Err(key.describe(t))
        }
    }));
    let mut covers = Vec::new();
    for a in t.nonzero() {
        covers.extend(checked_covers(t, a)?);
    }
    for (name, c) in [("τ of the quotient is cover-to-join", &quotient), ("η is cover-to-join", &tight)] {
        let v = check_cover_to_join(t, &covers, &c.algebra, &c.tau);
        rep.push(Check::single(name, v.is_ok(), || v.clone().unwrap_err()));
    }
    rep.note(format!("|B(S)| = {}, |I| = {}, |T(S)| = {}", b.order(), quotient.ck_ideal.len(), k));
    Ok(rep)
}

/// Identity preservation is required exactly when both sides are monoids.
pub fn unital_convention(s: &InverseSemigroupTable, t: &InverseSemigroupTable) -> bool {
    s.is_monoid() && t.is_monoid()
}

/// `θ(a) \ (θ(a₁) ∨ … ∨ θ(aₘ))`.
fn basis_value(
    s: &InverseSemigroupTable,
    tgt: &BooleanInvSemigroup,
    theta: &MorphismTable,
    key: &BasisKey,
) -> Result<ElementId> {
    let images: Vec<ElementId> = key.parts.iter().map(|&p| theta.apply(p)).collect();
    let j = tgt
        .join_all(&images)
        .ok_or_else(|| Error::Axiom(format!("images of the parts of {} have no join", key.describe(s))))?;
    tgt.relative_complement(theta.apply(key.target), j)
}

/// The morphism `φ: B(S) → T` with `φ ∘ β = θ`: each filter `a↑` goes to
/// `θ(a) \ ⋁_{x < a} θ(x)` and a bisection to the join over its filters.
pub fn extend_homomorphism(
    bres: &BooleanizationResult,
    tgt: &BooleanInvSemigroup,
    theta: &MorphismTable,
) -> Result<MorphismTable> {
    let s = &bres.source;
    let point: Vec<ElementId> = s
        .elements()
        .map(|a| {
            if a.is_zero() {
                return Ok(ElementId::ZERO);
            }
            let parts = s.down_set(a).iter().copied().filter(|&x| x != a && !x.is_zero()).collect();
            basis_value(s, tgt, theta, &BasisKey { target: a, parts })
        })
        .collect::<Result<_>>()?;
    let map = bres
        .algebra()
        .elements()
        .map(|e| {
            let images: Vec<ElementId> = bres.points_of(e).iter().map(|&a| point[a.index()]).collect();
            tgt.join_all(&images)
                .ok_or_else(|| Error::Axiom(format!("images of the filters in {} have no join", bres.describe(e))))
        })
        .collect::<Result<_>>()?;
    Ok(MorphismTable::new(map))
}

/// The morphism `ψ: T(S) → T` with `ψ ∘ τ = θ`, read off representatives.
pub fn extend_cover_to_join(
    completion: &CompletionResult,
    tgt: &BooleanInvSemigroup,
    theta: &MorphismTable,
) -> Result<MorphismTable> {
    let phi = extend_homomorphism(&completion.booleanization, tgt, theta)?;
    let to = &completion.from_booleanization;
    let b = completion.booleanization.algebra();
    let map = completion
        .algebra
        .elements()
        .map(|c| b.elements().find(|&a| to.apply(a) == c).map(|a| phi.apply(a)).expect("surjective"))
        .collect();
    Ok(MorphismTable::new(map))
}

/// Outcome of one factorisation: which of the per-map checks failed.
#[derive(Default)]
struct Factorisation {
    formula: Option<String>,
    well_defined: Option<String>,
    morphism: Option<String>,
    commutes: Option<String>,
    unique: Option<String>,
}

fn summarise(rep: &mut CheckReport, what: &str, results: Vec<Factorisation>) {
    let n = results.len();
    let first = |f: &dyn Fn(&Factorisation) -> Option<String>| results.iter().find_map(f);
    rep.push(Check::new(format!("{what} agrees with the basis formula"), n, first(&|r| r.formula.clone())));
    rep.push(Check::new(format!("{what} is well defined on classes"), n, first(&|r| r.well_defined.clone())));
    rep.push(Check::new(format!("{what} is a morphism of Boolean inverse semigroups"), n, first(&|r| r.morphism.clone())));
    rep.push(Check::new(format!("{what} composes with the canonical map to θ"), n, first(&|r| r.commutes.clone())));
    rep.push(Check::new(format!("{what} is the only such morphism"), n, first(&|r| r.unique.clone())));
}

fn formula_check(
    bres: &BooleanizationResult,
    tgt: &BooleanInvSemigroup,
    theta: &MorphismTable,
    phi: &MorphismTable,
) -> Option<String> {
    let s = &bres.source;
    bres.basis_index.iter().find_map(|(k, &e)| match basis_value(s, tgt, theta, k) {
        Ok(v) if v == phi.apply(e) => None,
        Ok(_) => Some(format!("value on {}", k.describe(s))),
        Err(err) => Some(err.to_string()),
    })
}

/// Every homomorphism `S → T` factors uniquely through `β: S → B(S)`.
pub fn booleanization_factorisation_check(s: &InverseSemigroupTable, tgt: &BooleanInvSemigroup) -> Result<CheckReport> {
    let unital = unital_convention(s, tgt);
    let bres = booleanize(s)?;
    let homs = enumerate_morphisms(s, tgt, MorphismKind::homomorphism(unital), FACTORISATION_LIMITS)?;
    let b = bres.algebra();
    let results: Vec<Result<Factorisation>> = exec::map(&homs, |theta| {
        let mut out = Factorisation::default();
        let phi = match extend_homomorphism(&bres, tgt, theta) {
            Ok(p) => p,
            Err(e) => {
                out.formula = Some(format!("{}: {e}", theta.describe(s, tgt)));
                return Ok(out);
            }
        };
        out.formula = formula_check(&bres, tgt, theta, &phi).map(|w| format!("{}: {w}", theta.describe(s, tgt)));
        out.morphism = check_homomorphism(b, tgt, &phi, unital)
            .and_then(|_| check_additive(b, tgt, &phi))
            .err()
            .map(|w| format!("{}: {w}", theta.describe(s, tgt)));
        out.commutes = (bres.beta.then(&phi) != *theta).then(|| theta.describe(s, tgt));
        let fixed: Vec<(ElementId, ElementId)> = s.elements().map(|a| (bres.u_set(a), theta.apply(a))).collect();
        let all = enumerate_morphisms_with(b, tgt, MorphismKind::boolean(unital), FACTORISATION_LIMITS, &fixed)?;
        if all != vec![phi] {
            out.unique = Some(format!("{} morphisms extend {}", all.len(), theta.describe(s, tgt)));
        }
        Ok(out)
    });
    let results: Vec<Factorisation> = results.into_iter().collect::<Result<_>>()?;
    let mut rep = CheckReport::new(format!("factorisation of homomorphisms through B(S) into an algebra of order {}", tgt.order()));
    rep.note(format!("{} homomorphisms, identity preserved: {unital}", homs.len()));
    summarise(&mut rep, "φ", results);
    Ok(rep)
}

/// Every cover-to-join map `S → T` factors uniquely through `τ: S → T(S)`.
pub fn completion_factorisation_check(s: &InverseSemigroupTable, tgt: &BooleanInvSemigroup) -> Result<CheckReport> {
    let unital = unital_convention(s, tgt);
    let completion = exel_completion(s)?;
    let maps = enumerate_morphisms(s, tgt, MorphismKind::cover_to_join(unital), FACTORISATION_LIMITS)?;
    let bres = &completion.booleanization;
    let ts = &completion.algebra;
    let nu = &completion.from_booleanization;
    let results: Vec<Result<Factorisation>> = exec::map(&maps, |theta| {
        let mut out = Factorisation::default();
        let name = theta.describe(s, tgt);
        let phi = match extend_homomorphism(bres, tgt, theta) {
            Ok(p) => p,
            Err(e) => {
                out.formula = Some(format!("{name}: {e}"));
                return Ok(out);
            }
        };
        out.formula = formula_check(bres, tgt, theta, &phi).map(|w| format!("{name}: {w}"));
        let psi = extend_cover_to_join(&completion, tgt, theta)?;
        out.well_defined = bres
            .algebra()
            .elements()
            .find(|&a| psi.apply(nu.apply(a)) != phi.apply(a))
            .map(|a| format!("{name}: class of {}", bres.describe(a)));
        out.morphism = check_homomorphism(ts, tgt, &psi, unital)
            .and_then(|_| check_additive(ts, tgt, &psi))
            .err()
            .map(|w| format!("{name}: {w}"));
        out.commutes = (completion.tau.then(&psi) != *theta).then(|| name.clone());
        let fixed: Vec<(ElementId, ElementId)> = s.elements().map(|a| (completion.tau.apply(a), theta.apply(a))).collect();
        let all = enumerate_morphisms_with(ts, tgt, MorphismKind::boolean(unital), FACTORISATION_LIMITS, &fixed)?;
        if all != vec![psi] {
            out.unique = Some(format!("{} morphisms extend {name}", all.len()));
        }
        Ok(out)
    });
    let results: Vec<Factorisation> = results.into_iter().collect::<Result<_>>()?;
    let mut rep =
        CheckReport::new(format!("factorisation of cover-to-join maps through T(S) into an algebra of order {}", tgt.order()));
    rep.note(format!("{} cover-to-join maps, identity preserved: {unital}", maps.len()));
    summarise(&mut rep, "ψ", results);
    Ok(rep)
}

/// For homomorphisms into each target: cover-to-join on `S`, on `E(S)`, and
/// on a transversal of the nonzero D-classes are the same condition.
pub fn cover_to_join_reduction_checks(s: &InverseSemigroupTable, targets: &[BooleanInvSemigroup]) -> Result<CheckReport> {
    let mut all = Vec::new();
    let mut idem = Vec::new();
    let mut transversal = Vec::new();
    let reps: Vec<ElementId> = s
        .d_class_partition()
        .iter()
        .map(|class| class.iter().copied().find(|&x| s.is_idempotent(x)).expect("a D-class holds an idempotent"))
        .collect();
    for a in s.nonzero() {
        let covers = checked_covers(s, a)?;
        if s.is_idempotent(a) {
            idem.extend(covers.iter().cloned());
        }
        if reps.contains(&a) {
            transversal.extend(covers.iter().cloned());
        }
        all.extend(covers);
    }
    let mut rep = CheckReport::new("cover-to-join on S, on E(S) and on a D-class transversal");
    let labels: Vec<&str> = reps.iter().map(|&e| s.label(e)).collect();
    rep.note(format!("transversal {{{}}}", labels.join(",")));
    for tgt in targets {
        let unital = unital_convention(s, tgt);
        let homs = enumerate_morphisms(s, tgt, MorphismKind::homomorphism(unital), FACTORISATION_LIMITS)?;
        rep.push(Check::over(format!("agreement into an algebra of order {}", tgt.order()), homs.iter(), |m| {
            let flags = [&all, &idem, &transversal].map(|c| check_cover_to_join(s, c, tgt, m).is_ok());
            if flags[0] == flags[1] && flags[1] == flags[2] {
                Ok(())
            } else {
                Err(format!("{} gives {flags:?}", m.describe(s, tgt)))
            }
        }));
    }
    Ok(rep)
}
