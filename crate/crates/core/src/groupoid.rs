//! Finite groupoids, their Boolean inverse semigroups of partial bisections,
//! reductions to invariant sets of identities, and the Stone duality between
//! the two at finite scale.
//!
//! Arrows are indexed `0..n`; a partial bisection is a `u64` mask over arrow
//! indices, so groupoids carry at most 64 arrows.

use std::collections::HashMap;
use std::ops::Deref;

use crate::boolean::{
    additive_ideal_generated, all_additive_ideals, check_additive, check_additive_ideal, check_homomorphism,
    check_weakly_meet_preserving, quotient_by_ideal, AdditiveIdeal, BooleanInvSemigroup, MorphismTable, Realization,
};
use crate::error::{Error, Result};
use crate::exec;
use crate::filters::{filter_product, proper_filters, Filter};
use crate::report::{Check, CheckReport};
use crate::table::{ElementId, InverseSemigroupTable};

pub const MAX_ARROWS: usize = 64;
/// Groupoids above this size need [`BisectionLimits::allow_large`].
pub const DEFAULT_ARROW_LIMIT: usize = 24;
pub const DEFAULT_BISECTION_LIMIT: usize = 4096;

/// A finite groupoid. Identities are the arrows fixed by `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    labels: Vec<String>,
    d: Vec<usize>,
    r: Vec<usize>,
    inv: Vec<usize>,
    /// `compose[g * n + h]` is `g·h`, defined iff `d(g) = r(h)`.
    compose: Vec<Option<usize>>,
}

impl FiniteGroupoid {
    /// Validates the groupoid axioms.
    pub fn new(
        labels: Vec<String>,
        d: Vec<usize>,
        r: Vec<usize>,
        inv: Vec<usize>,
        compose: Vec<Option<usize>>,
    ) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ARROWS {
            return Err(Error::bound("groupoid arrows", MAX_ARROWS));
        }
        if d.len() != n || r.len() != n || inv.len() != n || compose.len() != n * n {
            return Err(Error::Format("groupoid component lengths disagree".into()));
        }
        let in_range = |v: &[usize]| v.iter().all(|&x| x < n);
        if !in_range(&d) || !in_range(&r) || !in_range(&inv) || compose.iter().flatten().any(|&x| x >= n) {
            return Err(Error::Format("arrow index out of range".into()));
        }
        let g = FiniteGroupoid { labels, d, r, inv, compose };
        match g.first_violation() {
            Some(w) => Err(Error::Axiom(w)),
            None => Ok(g),
        }
    }

    fn first_violation(&self) -> Option<String> {
        let n = self.arrow_count();
        let l = |g: usize| &self.labels[g];
        for g in 0..n {
            let (dg, rg) = (self.d[g], self.r[g]);
            if self.d[dg] != dg || self.r[dg] != dg || self.d[rg] != rg || self.r[rg] != rg {
                return Some(format!("d or r of {} is not an identity", l(g)));
            }
            if self.compose(self.inv[g], g) != Some(dg) || self.compose(g, self.inv[g]) != Some(rg) {
                return Some(format!("inverse law fails at {}", l(g)));
            }
            if self.compose(g, dg) != Some(g) || self.compose(rg, g) != Some(g) {
                return Some(format!("unit law fails at {}", l(g)));
            }
            for h in 0..n {
                let gh = self.compose(g, h);
                if gh.is_some() != (dg == self.r[h]) {
                    return Some(format!("{}·{} defined iff d({0}) = r({1}) fails", l(g), l(h)));
                }
                if let Some(gh) = gh {
                    if self.d[gh] != self.d[h] || self.r[gh] != rg {
                        return Some(format!("{}·{} has the wrong ends", l(g), l(h)));
                    }
                    for k in 0..n {
                        if let (Some(ghk), Some(hk)) = (self.compose(gh, k), self.compose(h, k)) {
                            if self.compose(g, hk) != Some(ghk) {
                                return Some(format!("associativity fails at ({}, {}, {})", l(g), l(h), l(k)));
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Pair groupoid on `k` points: arrow `(i,j)` goes from `j` to `i`, and
    /// `(i,j)·(j,l) = (i,l)`. Arrow index is `i·k + j`.
    pub fn pair(k: usize) -> Result<Self> {
        if k * k > MAX_ARROWS {
            return Err(Error::bound("groupoid arrows", MAX_ARROWS));
        }
        let n = k * k;
        let labels = (0..n).map(|a| format!("({},{})", a / k + 1, a % k + 1)).collect();
        let d = (0..n).map(|a| (a % k) * k + a % k).collect();
        let r = (0..n).map(|a| (a / k) * k + a / k).collect();
        let inv = (0..n).map(|a| (a % k) * k + a / k).collect();
        let compose = (0..n * n)
            .map(|p| {
                let (g, h) = (p / n, p % n);
                (g % k == h / k).then(|| (g / k) * k + h % k)
            })
            .collect();
        Self::new(labels, d, r, inv, compose)
    }

    /// `k` identities and nothing else.
    pub fn discrete(k: usize) -> Result<Self> {
        let ids: Vec<usize> = (0..k).collect();
        let compose = (0..k * k).map(|p| (p / k == p % k).then_some(p / k)).collect();
        Self::new((1..=k).map(|i| format!("x{i}")).collect(), ids.clone(), ids.clone(), ids, compose)
    }

    pub fn empty() -> Self {
        FiniteGroupoid { labels: Vec::new(), d: Vec::new(), r: Vec::new(), inv: Vec::new(), compose: Vec::new() }
    }

    pub fn arrow_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    #[inline]
    pub fn d(&self, g: usize) -> usize {
        self.d[g]
    }

    #[inline]
    pub fn r(&self, g: usize) -> usize {
        self.r[g]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    #[inline]
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose[g * self.arrow_count() + h]
    }

    pub fn is_identity(&self, g: usize) -> bool {
        self.d[g] == g
    }

    pub fn identities(&self) -> Vec<usize> {
        (0..self.arrow_count()).filter(|&g| self.is_identity(g)).collect()
    }

    /// `X ⊆ G_o` with `d(g) ∈ X ⟺ r(g) ∈ X` for every arrow.
    pub fn is_invariant_subset(&self, x: &[usize]) -> bool {
        let inside = self.identity_mask(x);
        (0..self.arrow_count()).all(|g| (inside >> self.d[g] & 1) == (inside >> self.r[g] & 1))
    }

    fn identity_mask(&self, x: &[usize]) -> u64 {
        x.iter().fold(0u64, |m, &i| m | 1 << i)
    }

    /// `G|_X`: arrows with both ends in `X`. Invariance is not required here.
    pub fn reduction(&self, x: &[usize]) -> Result<Reduction> {
        if let Some(&bad) = x.iter().find(|&&i| i >= self.arrow_count() || !self.is_identity(i)) {
            return Err(Error::Precondition(format!("arrow {bad} is not an identity")));
        }
        let inside = self.identity_mask(x);
        let keep: Vec<usize> =
            (0..self.arrow_count()).filter(|&g| inside >> self.d[g] & 1 == 1 && inside >> self.r[g] & 1 == 1).collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let m = keep.len();
        let groupoid = FiniteGroupoid {
            labels: keep.iter().map(|&g| self.labels[g].clone()).collect(),
            d: keep.iter().map(|&g| pos[&self.d[g]]).collect(),
            r: keep.iter().map(|&g| pos[&self.r[g]]).collect(),
            inv: keep.iter().map(|&g| pos[&self.inv[g]]).collect(),
            compose: (0..m * m).map(|p| self.compose(keep[p / m], keep[p % m]).map(|c| pos[&c])).collect(),
        };
        Ok(Reduction { groupoid, embedding: keep })
    }
}

/// A reduction together with the original index of each kept arrow.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub groupoid: FiniteGroupoid,
    pub embedding: Vec<usize>,
}

/// Searches for a groupoid isomorphism, returned as the image of each arrow.
pub fn find_groupoid_isomorphism(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Option<Vec<usize>> {
    let n = g.arrow_count();
    if n != h.arrow_count() || g.identities().len() != h.identities().len() {
        return None;
    }
    fn go(g: &FiniteGroupoid, h: &FiniteGroupoid, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>, next: usize) -> bool {
        let n = g.arrow_count();
        if next == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || g.is_identity(next) != h.is_identity(cand) {
                continue;
            }
            map[next] = Some(cand);
            let ok = (0..=next).all(|a| {
                let fa = map[a].unwrap();
                let ends = [(g.d(a), h.d(fa)), (g.r(a), h.r(fa)), (g.inv(a), h.inv(fa))];
                ends.iter().all(|&(x, fx)| map[x].is_none_or(|y| y == fx))
                    && (0..=next).all(|b| {
                        let fb = map[b].unwrap();
                        match (g.compose(a, b), h.compose(fa, fb)) {
                            (None, None) => true,
                            (Some(c), Some(fc)) => map[c].is_none_or(|y| y == fc),
                            _ => false,
                        }
                    })
            });
            if ok {
                used[cand] = true;
                if go(g, h, map, used, next + 1) {
                    return true;
                }
                used[cand] = false;
            }
            map[next] = None;
        }
        false
    }
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    go(g, h, &mut map, &mut used, 0).then(|| map.into_iter().map(Option::unwrap).collect())
}

/// The groupoid of proper filters. Arrow `i` is the filter whose minimum is
/// element `i + 1`, and carries that element's label.
pub fn universal_groupoid(t: &InverseSemigroupTable) -> Result<FiniteGroupoid> {
    let filters = proper_filters(t);
    let n = filters.len();
    if n > MAX_ARROWS {
        return Err(Error::bound("proper filters", MAX_ARROWS));
    }
    let pos = |f: Filter| f.min.index() - 1;
    FiniteGroupoid::new(
        filters.iter().map(|f| t.label(f.min).to_string()).collect(),
        filters.iter().map(|f| t.d(f.min).index() - 1).collect(),
        filters.iter().map(|f| t.r(f.min).index() - 1).collect(),
        filters.iter().map(|f| t.inv(f.min).index() - 1).collect(),
        (0..n * n).map(|p| filter_product(t, filters[p / n], filters[p % n]).map(pos)).collect(),
    )
}

/// Bounds on bisection enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BisectionLimits {
    /// Permit groupoids with more than [`DEFAULT_ARROW_LIMIT`] arrows.
    pub allow_large: bool,
    pub max_bisections: usize,
}

impl Default for BisectionLimits {
    fn default() -> Self {
        BisectionLimits { allow_large: false, max_bisections: DEFAULT_BISECTION_LIMIT }
    }
}

/// All partial bisections of a groupoid as a Boolean inverse semigroup. The
/// element order is by size, then by mask; the empty bisection is zero.
#[derive(Debug, Clone)]
pub struct BisectionAlgebra {
    groupoid: FiniteGroupoid,
    masks: Vec<u64>,
    index: HashMap<u64, ElementId>,
    algebra: BooleanInvSemigroup,
}

impl Deref for BisectionAlgebra {
    type Target = BooleanInvSemigroup;

    fn deref(&self) -> &BooleanInvSemigroup {
        &self.algebra
    }
}

fn arrows_of(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

fn enumerate_bisection_masks(g: &FiniteGroupoid, limit: usize) -> Result<Vec<u64>> {
    let ids = g.identities();
    let leaving: Vec<Vec<usize>> = ids.iter().map(|&u| (0..g.arrow_count()).filter(|&a| g.d(a) == u).collect()).collect();
    let mut out = Vec::new();
    // one choice per domain identity: no arrow, or an arrow with unused range
    fn go(
        g: &FiniteGroupoid,
        leaving: &[Vec<usize>],
        k: usize,
        mask: u64,
        ranges: u64,
        limit: usize,
        out: &mut Vec<u64>,
    ) -> bool {
        if k == leaving.len() {
            out.push(mask);
            return out.len() <= limit;
        }
        if !go(g, leaving, k + 1, mask, ranges, limit, out) {
            return false;
        }
        for &a in &leaving[k] {
            if ranges >> g.r(a) & 1 == 0 && !go(g, leaving, k + 1, mask | 1 << a, ranges | 1 << g.r(a), limit, out) {
                return false;
            }
        }
        true
    }
    if !go(g, &leaving, 0, 0, 0, limit, &mut out) {
        return Err(Error::bound("partial bisections", limit));
    }
    out.sort_by_key(|&m| (m.count_ones(), m));
    Ok(out)
}

/// Every partial bisection of `g`, with set-theoretic operations.
pub fn all_bisections(g: &FiniteGroupoid, limits: BisectionLimits) -> Result<BisectionAlgebra> {
    if g.arrow_count() > DEFAULT_ARROW_LIMIT && !limits.allow_large {
        return Err(Error::bound("groupoid arrows (pass allow_large to exceed)", DEFAULT_ARROW_LIMIT));
    }
    let masks = enumerate_bisection_masks(g, limits.max_bisections)?;
    let n = masks.len();
    let index: HashMap<u64, ElementId> = masks.iter().enumerate().map(|(i, &m)| (m, ElementId::from(i))).collect();

    // arrow of each bisection leaving each identity, for O(|B|) products
    let arrows = g.arrow_count();
    let by_domain: Vec<Vec<Option<u8>>> = masks
        .iter()
        .map(|&m| {
            let mut v = vec![None; arrows];
            for a in arrows_of(m) {
                v[g.d(a)] = Some(a as u8);
            }
            v
        })
        .collect();
    let product_mask = |x: usize, y: usize| -> u64 {
        arrows_of(masks[y]).fold(0u64, |acc, h| match by_domain[x][g.r(h)] {
            Some(a) => acc | 1 << g.compose(a as usize, h).expect("composable by construction"),
            None => acc,
        })
    };
    let products: Vec<ElementId> = exec::map_range(n * n, |p| index[&product_mask(p / n, p % n)]);
    let inverse: Vec<ElementId> =
        masks.iter().map(|&m| index[&arrows_of(m).fold(0u64, |acc, a| acc | 1 << g.inv(a))]).collect();
    let labels: Vec<String> = masks
        .iter()
        .map(|&m| {
            let parts: Vec<&str> = arrows_of(m).map(|a| g.label(a)).collect();
            format!("{{{}}}", parts.join(","))
        })
        .collect();
    let table = InverseSemigroupTable::from_parts(labels, products, inverse);
    let join = exec::map_range(n * n, |p| index.get(&(masks[p / n] | masks[p % n])).copied());
    let meet = exec::map_range(n * n, |p| index[&(masks[p / n] & masks[p % n])]);
    let minus = exec::map_range(n * n, |p| index[&(masks[p / n] & !masks[p % n])]);
    let algebra = BooleanInvSemigroup::from_parts(table, join, meet, minus, Realization::Bisections);
    Ok(BisectionAlgebra { groupoid: g.clone(), masks, index, algebra })
}

impl BisectionAlgebra {
    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn algebra(&self) -> &BooleanInvSemigroup {
        &self.algebra
    }

    pub fn into_algebra(self) -> BooleanInvSemigroup {
        self.algebra
    }

    pub fn mask(&self, e: ElementId) -> u64 {
        self.masks[e.index()]
    }

    /// The element with exactly these arrows, if they form a bisection.
    pub fn element(&self, mask: u64) -> Option<ElementId> {
        self.index.get(&mask).copied()
    }

    pub fn element_of_arrows(&self, arrows: &[usize]) -> Option<ElementId> {
        self.element(arrows.iter().fold(0u64, |m, &a| m | 1 << a))
    }

    pub fn arrows(&self, e: ElementId) -> Vec<usize> {
        arrows_of(self.mask(e)).collect()
    }

    pub fn singleton(&self, g: usize) -> ElementId {
        self.index[&(1u64 << g)]
    }

    /// Domain identities of the arrows of `e`.
    pub fn domain_identities(&self, e: ElementId) -> u64 {
        arrows_of(self.mask(e)).fold(0u64, |m, a| m | 1 << self.groupoid.d(a))
    }

    pub fn range_identities(&self, e: ElementId) -> u64 {
        arrows_of(self.mask(e)).fold(0u64, |m, a| m | 1 << self.groupoid.r(a))
    }
}

/// `A ↦ A ∩ G|_X` from the bisections of `G` onto those of the reduction.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub reduction: Reduction,
    pub algebra: BisectionAlgebra,
    pub morphism: MorphismTable,
}

pub fn restriction_morphism(full: &BisectionAlgebra, x: &[usize], limits: BisectionLimits) -> Result<Restriction> {
    let g = full.groupoid();
    let reduction = g.reduction(x)?;
    if !g.is_invariant_subset(x) {
        return Err(Error::Precondition("identity set is not invariant".into()));
    }
    let algebra = all_bisections(&reduction.groupoid, limits)?;
    let pos: HashMap<usize, usize> = reduction.embedding.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let map = full
        .elements()
        .map(|e| {
            let m = arrows_of(full.mask(e)).filter_map(|a| pos.get(&a)).fold(0u64, |m, &i| m | 1 << i);
            algebra.element(m).expect("a subset of a bisection is a bisection")
        })
        .collect();
    Ok(Restriction { reduction, algebra, morphism: MorphismTable::new(map) })
}

/// Groupoid of ultrafilters of a finite Boolean inverse semigroup. Arrow `k`
/// is the ultrafilter generated by the `k`-th atom, labelled as that atom.
pub fn stone_groupoid(b: &BooleanInvSemigroup) -> Result<FiniteGroupoid> {
    let atoms = b.atoms();
    let n = atoms.len();
    if n > MAX_ARROWS {
        return Err(Error::bound("ultrafilters", MAX_ARROWS));
    }
    let pos: HashMap<ElementId, usize> = atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    FiniteGroupoid::new(
        atoms.iter().map(|&a| b.label(a).to_string()).collect(),
        atoms.iter().map(|&a| pos[&b.d(a)]).collect(),
        atoms.iter().map(|&a| pos[&b.r(a)]).collect(),
        atoms.iter().map(|&a| pos[&b.inv(a)]).collect(),
        (0..n * n)
            .map(|p| {
                let (x, y) = (atoms[p / n], atoms[p % n]);
                (b.d(x) == b.r(y)).then(|| pos[&b.mul(x, y)])
            })
            .collect(),
    )
}

/// Validates the Boolean axioms first; a failure names the axiom.
pub fn stone_groupoid_of_table(t: &InverseSemigroupTable) -> Result<FiniteGroupoid> {
    let b = BooleanInvSemigroup::from_table(t.clone()).map_err(|e| Error::Precondition(e.to_string()))?;
    stone_groupoid(&b)
}

/// `B ≅ KB(G(B))` through `a ↦ V_a`, the ultrafilters containing `a`.
pub fn duality_checks(b: &BooleanInvSemigroup) -> Result<CheckReport> {
    let g = stone_groupoid(b)?;
    let kb = all_bisections(&g, BisectionLimits { allow_large: true, ..Default::default() })?;
    let atoms = b.atoms();
    let v_mask = |a: ElementId| atoms.iter().enumerate().filter(|(_, &x)| b.leq(x, a)).fold(0u64, |m, (i, _)| m | 1 << i);
    let mut rep = CheckReport::new(format!("B ≅ KB(G(B)) for an algebra of order {}", b.order()));
    let v: Vec<Option<ElementId>> = b.elements().map(|a| kb.element(v_mask(a))).collect();
    rep.push(Check::over("V_a is a partial bisection", b.elements(), |a| {
        v[a.index()].map(|_| ()).ok_or_else(|| format!("V_{} is not a bisection", b.label(a)))
    }));
    if !rep.passed() {
        return Ok(rep);
    }
    let m = MorphismTable::new(v.into_iter().map(Option::unwrap).collect());
    rep.push(Check::single("a ↦ V_a is injective", m.is_injective(), || "two elements share V".into()));
    rep.push(Check::single("a ↦ V_a is surjective", m.is_surjective(kb.order()), || {
        format!("{} elements against {} bisections", b.order(), kb.order())
    }));
    rep.push(Check::single("a ↦ V_a is multiplicative", check_homomorphism(b, &kb, &m, false).is_ok(), || {
        check_homomorphism(b, &kb, &m, false).unwrap_err()
    }));
    rep.push(Check::over("V_{a⁻¹} = V_a⁻¹", b.elements(), |a| {
        if m.apply(b.inv(a)) == kb.inv(m.apply(a)) {
            Ok(())
        } else {
            Err(b.label(a).to_string())
        }
    }));
    Ok(rep)
}

/// `G ≅ G(KB(G))` through `g ↦` the ultrafilter of bisections containing `g`,
/// which is generated by the singleton `{g}`.
pub fn duality_checks_groupoid(g: &FiniteGroupoid) -> Result<CheckReport> {
    let kb = all_bisections(g, BisectionLimits { allow_large: true, ..Default::default() })?;
    let h = stone_groupoid(&kb)?;
    let atoms = kb.atoms();
    let pos: HashMap<ElementId, usize> = atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut rep = CheckReport::new(format!("G ≅ G(KB(G)) for a groupoid with {} arrows", g.arrow_count()));
    let phi: Vec<Option<usize>> = (0..g.arrow_count()).map(|a| pos.get(&kb.singleton(a)).copied()).collect();
    rep.push(Check::over("singletons are atoms", 0..g.arrow_count(), |a| {
        phi[a].map(|_| ()).ok_or_else(|| format!("{{{}}} is not an atom", g.label(a)))
    }));
    rep.push(Check::single("every ultrafilter is generated by a singleton", atoms.len() == g.arrow_count(), || {
        format!("{} ultrafilters for {} arrows", atoms.len(), g.arrow_count())
    }));
    if !rep.passed() {
        return Ok(rep);
    }
    let phi: Vec<usize> = phi.into_iter().map(Option::unwrap).collect();
    rep.push(Check::over("d, r and inverse are preserved", 0..g.arrow_count(), |a| {
        let p = phi[a];
        if h.d(p) == phi[g.d(a)] && h.r(p) == phi[g.r(a)] && h.inv(p) == phi[g.inv(a)] {
            Ok(())
        } else {
            Err(g.label(a).to_string())
        }
    }));
    rep.push(Check::over(
        "composition is preserved",
        (0..g.arrow_count()).flat_map(|a| (0..g.arrow_count()).map(move |c| (a, c))),
        |(a, c)| {
            if g.compose(a, c).map(|x| phi[x]) == h.compose(phi[a], phi[c]) {
                Ok(())
            } else {
                Err(format!("{}·{}", g.label(a), g.label(c)))
            }
        },
    ));
    Ok(rep)
}

/// Every subset of the identities of `g` that is invariant. All subsets are
/// closed at finite scale.
pub fn invariant_identity_subsets(g: &FiniteGroupoid) -> Result<Vec<Vec<usize>>> {
    let ids = g.identities();
    if ids.len() > 16 {
        return Err(Error::bound("identities for subset enumeration", 16));
    }
    Ok((0u32..1 << ids.len())
        .map(|m| (0..ids.len()).filter(|i| m >> i & 1 == 1).map(|i| ids[i]).collect::<Vec<_>>())
        .filter(|x| g.is_invariant_subset(x))
        .collect())
}

/// The dual order isomorphism between additive ideals of `b` and invariant
/// subsets of identities of its Stone groupoid. An ideal goes to the
/// complement of the identities it contains; a set `X` goes to the elements
/// whose domain avoids `X`.
pub fn ideal_lattice_correspondence(b: &BooleanInvSemigroup) -> Result<CheckReport> {
    let g = stone_groupoid(b)?;
    let atoms = b.atoms();
    let ids = g.identities();
    let ideals = all_additive_ideals(b)?;
    let subsets = invariant_identity_subsets(&g)?;
    let closed_of = |i: &AdditiveIdeal| -> Vec<usize> { ids.iter().copied().filter(|&u| !i.contains(atoms[u])).collect() };
    let ideal_of = |x: &[usize]| -> Vec<ElementId> {
        b.elements().filter(|&s| x.iter().all(|&u| !b.leq(atoms[u], b.d(s)))).collect()
    };
    let mut rep = CheckReport::new("additive ideals against invariant identity sets");
    rep.note("every subset of a finite discrete space is closed, so closed invariant sets are the invariant sets");
    rep.push(Check::over("each ideal gives an invariant set", ideals.iter(), |i| {
        if g.is_invariant_subset(&closed_of(i)) {
            Ok(())
        } else {
            Err(format!("ideal of size {}", i.len()))
        }
    }));
    rep.push(Check::over("each invariant set gives an additive ideal", subsets.iter(), |x| {
        let members = ideal_of(x);
        let as_ideal = additive_ideal_generated(b, &members);
        if as_ideal.members() == members.as_slice() && check_additive_ideal(b, &as_ideal).is_ok() {
            Ok(())
        } else {
            Err(format!("{x:?}"))
        }
    }));
    rep.push(Check::over("ideal → set → ideal is the identity", ideals.iter(), |i| {
        if ideal_of(&closed_of(i)) == i.members() {
            Ok(())
        } else {
            Err(format!("ideal of size {}", i.len()))
        }
    }));
    rep.push(Check::over("set → ideal → set is the identity", subsets.iter(), |x| {
        let i = additive_ideal_generated(b, &ideal_of(x));
        if closed_of(&i) == *x {
            Ok(())
        } else {
            Err(format!("{x:?}"))
        }
    }));
    rep.push(Check::single("the two families have the same size", ideals.len() == subsets.len(), || {
        format!("{} ideals, {} invariant sets", ideals.len(), subsets.len())
    }));
    rep.push(Check::over(
        "inclusion is reversed",
        ideals.iter().flat_map(|i| ideals.iter().map(move |j| (i, j))),
        |(i, j)| {
            let (ci, cj) = (closed_of(i), closed_of(j));
            if i.is_subset(j) == cj.iter().all(|u| ci.contains(u)) {
                Ok(())
            } else {
                Err(format!("ideals of size {} and {}", i.len(), j.len()))
            }
        },
    ));
    Ok(rep)
}

/// `KB(G|_X) ≅ KB(G)/I_X` via `[A] ↦ A ∩ G|_X`, with `I_X` computed both as
/// the kernel of the restriction and from the domain description.
pub fn reduction_quotient_check(g: &FiniteGroupoid, x: &[usize]) -> Result<CheckReport> {
    let full = all_bisections(g, BisectionLimits::default())?;
    let rest = restriction_morphism(&full, x, BisectionLimits::default())?;
    let m = &rest.morphism;
    let mut rep = CheckReport::new(format!("reduction to {} of {} identities", x.len(), g.identities().len()));
    let verdict = |name: &str, v: std::result::Result<(), String>| {
        let ok = v.is_ok();
        Check::single(name, ok, || v.unwrap_err())
    };
    rep.push(verdict("restriction is a homomorphism", check_homomorphism(&full, &rest.algebra, m, false)));
    rep.push(verdict("restriction is additive", check_additive(full.algebra(), rest.algebra.algebra(), m)));
    rep.push(Check::single("restriction is surjective", m.is_surjective(rest.algebra.order()), || "image too small".into()));
    rep.push(verdict(
        "restriction is weakly meet preserving",
        check_weakly_meet_preserving(&full, &rest.algebra, m),
    ));

    let xmask = x.iter().fold(0u64, |acc, &u| acc | 1 << u);
    let kernel = m.kernel();
    let by_domain: Vec<ElementId> = full.elements().filter(|&e| full.domain_identities(e) & xmask == 0).collect();
    let by_range: Vec<ElementId> = full.elements().filter(|&e| full.range_identities(e) & xmask == 0).collect();
    rep.push(Check::single("kernel is {A : d(A) ∩ X = ∅}", kernel == by_domain, || {
        format!("{} kernel elements, {} by domain", kernel.len(), by_domain.len())
    }));
    rep.push(Check::single("kernel is {A : r(A) ∩ X = ∅}", kernel == by_range, || {
        format!("{} kernel elements, {} by range", kernel.len(), by_range.len())
    }));
    let ideal = AdditiveIdeal::from_members(full.algebra(), &kernel)?;
    let q = quotient_by_ideal(full.algebra(), &ideal);
    rep.push(Check::over("[A] ↦ A ∩ G|_X is well defined", q.partition.classes.iter(), |class| {
        if class.iter().all(|&a| m.apply(a) == m.apply(class[0])) {
            Ok(())
        } else {
            Err(format!("class of {}", full.label(class[0])))
        }
    }));
    let canonical = MorphismTable::new(q.partition.classes.iter().map(|c| m.apply(c[0])).collect());
    rep.push(Check::single("[A] ↦ A ∩ G|_X is bijective", canonical.is_injective() && canonical.is_surjective(rest.algebra.order()), || {
        format!("{} classes against {} bisections", q.algebra.order(), rest.algebra.order())
    }));
    rep.push(verdict(
        "[A] ↦ A ∩ G|_X is multiplicative",
        check_homomorphism(&q.algebra, &rest.algebra, &canonical, false),
    ));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::boolean_validation;
    use crate::fixtures;
    use crate::table::find_isomorphism;

    fn kb(g: &FiniteGroupoid) -> BisectionAlgebra {
        all_bisections(g, BisectionLimits::default()).unwrap()
    }

    #[test]
    fn universal_groupoid_examples() {
        let c = universal_groupoid(&fixtures::chain3()).unwrap();
        assert_eq!(c.arrow_count(), 2);
        assert_eq!(c.identities().len(), 2);
        assert_eq!(c.compose(0, 1), None);
        let b = universal_groupoid(&fixtures::b2()).unwrap();
        assert_eq!((b.arrow_count(), b.identities().len()), (4, 2));
        assert!(find_groupoid_isomorphism(&b, &FiniteGroupoid::pair(2).unwrap()).is_some());
        assert_eq!(universal_groupoid(&fixtures::two()).unwrap().arrow_count(), 1);
    }

    #[test]
    fn bisection_counts() {
        let p2 = kb(&FiniteGroupoid::pair(2).unwrap());
        assert_eq!(p2.order(), 7);
        assert!(find_isomorphism(&p2, &fixtures::i2()).is_some());
        let d2 = kb(&FiniteGroupoid::discrete(2).unwrap());
        assert_eq!(d2.order(), 4);
        assert!(find_isomorphism(&d2, &fixtures::sl22()).is_some());
        assert_eq!(kb(&FiniteGroupoid::empty()).order(), 1);
        // partial injections of a 3-set
        assert_eq!(kb(&FiniteGroupoid::pair(3).unwrap()).order(), 34);
    }

    #[test]
    fn bisection_count_matches_subset_scan() {
        for g in [FiniteGroupoid::pair(2).unwrap(), FiniteGroupoid::discrete(3).unwrap(), universal_groupoid(&fixtures::z2_0()).unwrap()] {
            let n = g.arrow_count();
            let brute = (0u64..1 << n)
                .filter(|&m| {
                    let arrows: Vec<usize> = arrows_of(m).collect();
                    arrows.iter().all(|&a| arrows.iter().all(|&b| a == b || (g.d(a) != g.d(b) && g.r(a) != g.r(b))))
                })
                .count();
            assert_eq!(kb(&g).order(), brute);
        }
    }

    #[test]
    fn bisection_algebras_are_boolean() {
        for g in [
            FiniteGroupoid::pair(2).unwrap(),
            FiniteGroupoid::discrete(3).unwrap(),
            universal_groupoid(&fixtures::z2_0()).unwrap(),
            universal_groupoid(&fixtures::b2()).unwrap(),
        ] {
            let a = kb(&g);
            let rep = boolean_validation(&a);
            assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
            let scanned = BooleanInvSemigroup::from_table(a.table().clone()).unwrap();
            for x in a.elements() {
                for y in a.elements() {
                    assert_eq!(a.join(x, y), scanned.join(x, y));
                    assert_eq!(a.meet(x, y), scanned.meet(x, y));
                    assert_eq!(a.minus(x, y), scanned.minus(x, y));
                    // natural order is inclusion
                    assert_eq!(a.leq(x, y), a.mask(x) & !a.mask(y) == 0);
                }
            }
        }
    }

    #[test]
    fn bisection_bounds() {
        let g = FiniteGroupoid::discrete(13).unwrap();
        assert!(matches!(all_bisections(&g, BisectionLimits::default()), Err(Error::Bound { .. })));
        let big = FiniteGroupoid::pair(5).unwrap();
        assert!(matches!(all_bisections(&big, BisectionLimits { allow_large: false, max_bisections: 1 << 20 }), Err(Error::Bound { .. })));
    }

    #[test]
    fn invariance_and_reduction() {
        let p = FiniteGroupoid::pair(2).unwrap();
        let ids = p.identities();
        assert!(!p.is_invariant_subset(&ids[..1]));
        assert_eq!(p.reduction(&ids[..1]).unwrap().groupoid.arrow_count(), 1);
        assert!(p.is_invariant_subset(&ids));
        assert_eq!(p.reduction(&ids).unwrap().groupoid, p);
        assert!(p.reduction(&[1]).is_err());
    }

    #[test]
    fn restriction_examples() {
        let full = kb(&FiniteGroupoid::discrete(2).unwrap());
        let r = restriction_morphism(&full, &[0], BisectionLimits::default()).unwrap();
        assert_eq!(r.algebra.order(), 2);
        let kernel: Vec<u64> = r.morphism.kernel().into_iter().map(|e| full.mask(e)).collect();
        assert_eq!(kernel, vec![0, 0b10]);

        let all = restriction_morphism(&full, &[0, 1], BisectionLimits::default()).unwrap();
        assert_eq!(all.morphism, MorphismTable::identity(4));

        let u = kb(&universal_groupoid(&fixtures::chain3()).unwrap());
        let f = fixtures::chain3().id("f").index() - 1;
        let r = restriction_morphism(&u, &[f], BisectionLimits::default()).unwrap();
        assert_eq!((u.order(), r.algebra.order()), (4, 2));

        let p = kb(&FiniteGroupoid::pair(2).unwrap());
        assert!(matches!(restriction_morphism(&p, &[0], BisectionLimits::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn stone_groupoid_examples() {
        let b = |t| BooleanInvSemigroup::from_table(t).unwrap();
        let g = stone_groupoid(&b(fixtures::sl22())).unwrap();
        assert!(find_groupoid_isomorphism(&g, &FiniteGroupoid::discrete(2).unwrap()).is_some());
        let g = stone_groupoid(&b(fixtures::i2())).unwrap();
        assert!(find_groupoid_isomorphism(&g, &FiniteGroupoid::pair(2).unwrap()).is_some());
        assert_eq!(stone_groupoid(&b(fixtures::two())).unwrap().arrow_count(), 1);
        let err = stone_groupoid_of_table(&fixtures::chain3()).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref m) if m.contains("complemented")));
    }

    #[test]
    fn duality_examples() {
        for t in [fixtures::i2(), fixtures::two(), fixtures::sl22(), fixtures::z2_0()] {
            let rep = duality_checks(&BooleanInvSemigroup::from_table(t).unwrap()).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        }
        for g in [FiniteGroupoid::pair(2).unwrap(), FiniteGroupoid::discrete(3).unwrap(), FiniteGroupoid::empty()] {
            let rep = duality_checks_groupoid(&g).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn ideal_lattice_examples() {
        let b = |t| BooleanInvSemigroup::from_table(t).unwrap();
        for (t, count) in [(fixtures::sl22(), 4), (fixtures::i2(), 2), (fixtures::two(), 2)] {
            let alg = b(t);
            assert_eq!(all_additive_ideals(&alg).unwrap().len(), count);
            let rep = ideal_lattice_correspondence(&alg).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn reduction_quotients() {
        let g = FiniteGroupoid::discrete(3).unwrap();
        for x in invariant_identity_subsets(&g).unwrap() {
            assert!(reduction_quotient_check(&g, &x).unwrap().passed());
        }
        let u = universal_groupoid(&fixtures::z2_0()).unwrap();
        for x in invariant_identity_subsets(&u).unwrap() {
            assert!(reduction_quotient_check(&u, &x).unwrap().passed());
        }
    }
}
