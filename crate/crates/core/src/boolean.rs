//! Boolean inverse semigroups: compatible joins, meets, relative complements,
//! skew operations, additive ideals and their congruences, and morphisms.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::filters::{all_minimal_covers, Cover};
use crate::report::{Check, CheckReport};
use crate::table::{ElementId, InverseSemigroupTable};

/// Where a Boolean inverse semigroup came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Realization {
    Table,
    Bisections,
    Quotient,
}

/// A finite Boolean inverse semigroup with its join, meet and difference
/// tables precomputed. `minus(a, b)` is `a \ (a ∧ b)`.
#[derive(Debug, Clone)]
pub struct BooleanInvSemigroup {
    table: InverseSemigroupTable,
    join: Vec<Option<ElementId>>,
    meet: Vec<ElementId>,
    minus: Vec<ElementId>,
    realization: Realization,
}

impl Deref for BooleanInvSemigroup {
    type Target = InverseSemigroupTable;

    fn deref(&self) -> &InverseSemigroupTable {
        &self.table
    }
}

/// Checks the Boolean axioms of a table by scanning the natural order. Each
/// axiom is reported separately.
pub fn boolean_validation(t: &InverseSemigroupTable) -> CheckReport {
    let mut rep = CheckReport::new("Boolean inverse semigroup axioms");
    let n = t.order();
    let pairs: Vec<(ElementId, ElementId)> = t.elements().flat_map(|a| t.elements().map(move |b| (a, b))).collect();

    rep.push(Check::over("meets exist", pairs.iter().copied(), |(a, b)| match t.meet(a, b) {
        Some(_) => Ok(()),
        None => Err(format!("{} and {} have no meet", t.label(a), t.label(b))),
    }));

    let joins: Vec<Option<ElementId>> = exec::map(&pairs, |&(a, b)| {
        if t.compatible(a, b) {
            t.join_if_exists(&[a, b])
        } else {
            None
        }
    });
    let join = |a: ElementId, b: ElementId| joins[a.index() * n + b.index()];
    rep.push(Check::over("compatible pairs have joins", pairs.iter().copied(), |(a, b)| {
        if !t.compatible(a, b) || join(a, b).is_some() {
            Ok(())
        } else {
            Err(format!("{} ~ {} but no join", t.label(a), t.label(b)))
        }
    }));

    rep.push(Check::over("multiplication distributes over compatible joins", pairs.iter().copied(), |(a, b)| {
        let Some(j) = join(a, b) else { return Ok(()) };
        for x in t.elements() {
            let left = join(t.mul(x, a), t.mul(x, b));
            let right = join(t.mul(a, x), t.mul(b, x));
            if left != Some(t.mul(x, j)) || right != Some(t.mul(j, x)) {
                return Err(format!("x = {} against {} v {}", t.label(x), t.label(a), t.label(b)));
            }
        }
        Ok(())
    }));

    let idem = t.idempotents();
    rep.push(Check::over(
        "idempotents are complemented in principal ideals",
        idem.iter().flat_map(|&e| idem.iter().copied().filter(move |&f| t.leq(f, e)).map(move |f| (e, f))),
        |(e, f)| {
            let ok = idem
                .iter()
                .any(|&g| t.leq(g, e) && t.mul(g, f).is_zero() && join(g, f) == Some(e));
            if ok {
                Ok(())
            } else {
                Err(format!("{} has no complement below {}", t.label(f), t.label(e)))
            }
        },
    ));
    rep
}

impl BooleanInvSemigroup {
    /// Validates the Boolean axioms and precomputes the operation tables.
    pub fn from_table(table: InverseSemigroupTable) -> Result<Self> {
        let rep = boolean_validation(&table);
        if let Some(c) = rep.failures().next() {
            return Err(Error::NotBoolean(format!("{}: {}", c.name, c.witness.clone().unwrap_or_default())));
        }
        let n = table.order();
        let t = &table;
        let join: Vec<Option<ElementId>> = exec::map_range(n * n, |k| {
            let (a, b) = (ElementId::from(k / n), ElementId::from(k % n));
            if t.compatible(a, b) {
                t.join_if_exists(&[a, b])
            } else {
                None
            }
        });
        let meet: Vec<ElementId> =
            exec::map_range(n * n, |k| t.meet(ElementId::from(k / n), ElementId::from(k % n)).unwrap());
        let idem = t.idempotents();
        let complement = |e: ElementId, f: ElementId| -> ElementId {
            // f ≤ e
            idem.iter()
                .copied()
                .find(|&g| t.leq(g, e) && t.mul(g, f).is_zero() && join[g.index() * n + f.index()] == Some(e))
                .expect("validated Boolean table")
        };
        let minus: Vec<ElementId> = exec::map_range(n * n, |k| {
            let a = ElementId::from(k / n);
            let m = meet[k];
            t.mul(a, complement(t.d(a), t.d(m)))
        });
        Ok(BooleanInvSemigroup { table, join, meet, minus, realization: Realization::Table })
    }

    pub(crate) fn from_parts(
        table: InverseSemigroupTable,
        join: Vec<Option<ElementId>>,
        meet: Vec<ElementId>,
        minus: Vec<ElementId>,
        realization: Realization,
    ) -> Self {
        BooleanInvSemigroup { table, join, meet, minus, realization }
    }

    pub fn table(&self) -> &InverseSemigroupTable {
        &self.table
    }

    pub fn realization(&self) -> Realization {
        self.realization
    }

    #[inline]
    pub fn join(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.join[a.index() * self.order() + b.index()]
    }

    /// Join of a compatible family; the empty family joins to zero.
    pub fn join_all(&self, xs: &[ElementId]) -> Option<ElementId> {
        xs.iter().try_fold(ElementId::ZERO, |acc, &x| self.join(acc, x))
    }

    #[inline]
    pub fn meet(&self, a: ElementId, b: ElementId) -> ElementId {
        self.meet[a.index() * self.order() + b.index()]
    }

    /// `a \ (a ∧ b)`; total.
    #[inline]
    pub fn minus(&self, a: ElementId, b: ElementId) -> ElementId {
        self.minus[a.index() * self.order() + b.index()]
    }

    /// The unique `x ≤ a` with `x ∨ c = a` and `x ∧ c = 0`.
    pub fn relative_complement(&self, a: ElementId, c: ElementId) -> Result<ElementId> {
        if !self.leq(c, a) {
            return Err(Error::not_below(c, a));
        }
        Ok(self.minus(a, c))
    }

    /// Largest element of `a↓` orthogonal to `b`, found by scanning `a↓`.
    pub fn skew_difference(&self, a: ElementId, b: ElementId) -> ElementId {
        let candidates: Vec<ElementId> =
            self.down_set(a).iter().copied().filter(|&x| self.orthogonal(x, b)).collect();
        candidates
            .iter()
            .copied()
            .find(|&m| candidates.iter().all(|&x| self.leq(x, m)))
            .expect("a Boolean inverse semigroup has a largest element of a↓ orthogonal to b")
    }

    /// `f·a·e` with `f = r(a) \ r(a)r(b)` and `e = d(a) \ d(a)d(b)`.
    pub fn skew_difference_formula(&self, a: ElementId, b: ElementId) -> ElementId {
        let f = self.minus(self.r(a), self.r(b));
        let e = self.minus(self.d(a), self.d(b));
        self.mul_all(&[f, a, e])
    }

    /// `f·a·e` with `f = r(b) \ r(a)r(b)`, the variant in which the range
    /// idempotent is taken from `b`.
    pub fn skew_difference_range_of_b(&self, a: ElementId, b: ElementId) -> ElementId {
        let f = self.minus(self.r(b), self.r(a));
        let e = self.minus(self.d(a), self.d(b));
        self.mul_all(&[f, a, e])
    }

    /// `(a ⊖ b) ∨ b`, always defined.
    pub fn skew_join(&self, a: ElementId, b: ElementId) -> ElementId {
        self.join(self.skew_difference_formula(a, b), b)
            .expect("the skew difference is orthogonal to b")
    }
}

/// Exhaustive checks of the skew operations on one algebra. The variant with
/// the range idempotent taken from `b` is compared too; disagreements are
/// recorded as notes.
pub fn skew_conformance(b: &BooleanInvSemigroup) -> CheckReport {
    let mut rep = CheckReport::new("skew difference and skew join");
    let pairs: Vec<(ElementId, ElementId)> = b.elements().flat_map(|x| b.elements().map(move |y| (x, y))).collect();
    rep.push(Check::over("largest element of a↓ orthogonal to b is unique", pairs.iter().copied(), |(x, y)| {
        let cands: Vec<ElementId> = b.down_set(x).iter().copied().filter(|&z| b.orthogonal(z, y)).collect();
        let maxima: Vec<ElementId> =
            cands.iter().copied().filter(|&m| cands.iter().all(|&z| b.leq(z, m))).collect();
        if maxima.len() == 1 {
            Ok(())
        } else {
            Err(format!("{} maxima for ({}, {})", maxima.len(), b.label(x), b.label(y)))
        }
    }));
    rep.push(Check::over("characterisation agrees with f·a·e, f = r(a) \\ r(a)r(b)", pairs.iter().copied(), |(x, y)| {
        let (s, f) = (b.skew_difference(x, y), b.skew_difference_formula(x, y));
        if s == f {
            Ok(())
        } else {
            Err(format!("({}, {}): {} vs {}", b.label(x), b.label(y), b.label(s), b.label(f)))
        }
    }));
    rep.push(Check::over("a ~ b implies a ▽ b = a ∨ b", pairs.iter().copied(), |(x, y)| {
        if !b.compatible(x, y) || Some(b.skew_join(x, y)) == b.join(x, y) {
            Ok(())
        } else {
            Err(format!("({}, {})", b.label(x), b.label(y)))
        }
    }));
    if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| b.skew_difference_range_of_b(x, y) != b.skew_difference(x, y)) {
        rep.note(format!(
            "f = r(b) \\ r(a)r(b) gives {} for ({}, {}) but the largest element of a↓ orthogonal to b is {}",
            b.label(b.skew_difference_range_of_b(x, y)),
            b.label(x),
            b.label(y),
            b.label(b.skew_difference(x, y))
        ));
    }
    rep
}

/// Anything that can report binary joins: scanned for plain tables, looked
/// up for Boolean ones.
pub trait JoinCarrier: Sync {
    fn carrier(&self) -> &InverseSemigroupTable;
    fn join_pair(&self, a: ElementId, b: ElementId) -> Option<ElementId>;
}

impl JoinCarrier for InverseSemigroupTable {
    fn carrier(&self) -> &InverseSemigroupTable {
        self
    }

    fn join_pair(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        if self.compatible(a, b) {
            self.join_if_exists(&[a, b])
        } else {
            None
        }
    }
}

impl JoinCarrier for BooleanInvSemigroup {
    fn carrier(&self) -> &InverseSemigroupTable {
        &self.table
    }

    fn join_pair(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.join(a, b)
    }
}

/// An additive ideal, stored as a sorted member list with a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveIdeal {
    members: Vec<ElementId>,
    mask: Vec<bool>,
}

impl AdditiveIdeal {
    fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| ElementId::from(i)).collect();
        AdditiveIdeal { members, mask }
    }

    /// Checks the ideal axioms before accepting `members`.
    pub fn from_members(b: &BooleanInvSemigroup, members: &[ElementId]) -> Result<Self> {
        let mut mask = vec![false; b.order()];
        for &m in members {
            mask[m.index()] = true;
        }
        let ideal = Self::from_mask(mask);
        if let Err(w) = check_additive_ideal(b, &ideal) {
            return Err(Error::Precondition(format!("not an additive ideal: {w}")));
        }
        Ok(ideal)
    }

    pub fn zero(order: usize) -> Self {
        let mut mask = vec![false; order];
        mask[0] = true;
        Self::from_mask(mask)
    }

    #[inline]
    pub fn contains(&self, a: ElementId) -> bool {
        self.mask[a.index()]
    }

    pub fn members(&self) -> &[ElementId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset(&self, other: &AdditiveIdeal) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }
}

/// Ideal, down-closed, contains zero, closed under binary compatible joins.
pub fn check_additive_ideal(b: &BooleanInvSemigroup, i: &AdditiveIdeal) -> std::result::Result<(), String> {
    if !i.contains(ElementId::ZERO) {
        return Err("zero missing".into());
    }
    for &x in i.members() {
        for s in b.elements() {
            for p in [b.mul(s, x), b.mul(x, s)] {
                if !i.contains(p) {
                    return Err(format!("{} in ideal but product {} is not", b.label(x), b.label(p)));
                }
            }
        }
        if let Some(&y) = b.down_set(x).iter().find(|&&y| !i.contains(y)) {
            return Err(format!("{} below {} is missing", b.label(y), b.label(x)));
        }
        for &y in i.members() {
            if let Some(j) = b.join(x, y) {
                if !i.contains(j) {
                    return Err(format!("join of {} and {} missing", b.label(x), b.label(y)));
                }
            }
        }
    }
    Ok(())
}

/// The smallest additive ideal containing `xs`: fixpoint of two-sided
/// multiplication, down-closure and binary compatible joins.
pub fn additive_ideal_generated(b: &BooleanInvSemigroup, xs: &[ElementId]) -> AdditiveIdeal {
    let n = b.order();
    let mut mask = vec![false; n];
    let mut members: Vec<ElementId> = Vec::new();
    let mut queue: Vec<ElementId> = Vec::new();
    let add = |x: ElementId, mask: &mut Vec<bool>, members: &mut Vec<ElementId>, queue: &mut Vec<ElementId>| {
        if !mask[x.index()] {
            mask[x.index()] = true;
            members.push(x);
            queue.push(x);
        }
    };
    add(ElementId::ZERO, &mut mask, &mut members, &mut queue);
    for &x in xs {
        add(x, &mut mask, &mut members, &mut queue);
    }
    while let Some(x) = queue.pop() {
        for s in b.elements() {
            add(b.mul(s, x), &mut mask, &mut members, &mut queue);
            add(b.mul(x, s), &mut mask, &mut members, &mut queue);
        }
        for &y in b.down_set(x) {
            add(y, &mut mask, &mut members, &mut queue);
        }
        let snapshot = members.clone();
        for y in snapshot {
            if let Some(j) = b.join(x, y) {
                add(j, &mut mask, &mut members, &mut queue);
            }
        }
    }
    AdditiveIdeal::from_mask(mask)
}

/// Every additive ideal, each generated by a set of idempotents.
pub fn all_additive_ideals(b: &BooleanInvSemigroup) -> Result<Vec<AdditiveIdeal>> {
    let idem: Vec<ElementId> = b.idempotents().into_iter().filter(|e| !e.is_zero()).collect();
    if idem.len() > 16 {
        return Err(Error::bound("idempotents for ideal enumeration", 16));
    }
    let mut seen: BTreeSet<Vec<ElementId>> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << idem.len()) {
        let gens: Vec<ElementId> = (0..idem.len()).filter(|i| mask >> i & 1 == 1).map(|i| idem[i]).collect();
        let ideal = additive_ideal_generated(b, &gens);
        if seen.insert(ideal.members().to_vec()) {
            out.push(ideal);
        }
    }
    out.sort_by(|x, y| (x.len(), x.members()).cmp(&(y.len(), y.members())));
    Ok(out)
}

/// A partition of the carrier into classes, each listed in index order;
/// classes are ordered by their least member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<ElementId>>,
}

impl Partition {
    /// Builds the partition from each element's least related element.
    fn from_representatives(reps: &[ElementId]) -> Self {
        let mut index: HashMap<ElementId, usize> = HashMap::new();
        let mut classes: Vec<Vec<ElementId>> = Vec::new();
        let mut class_of = Vec::with_capacity(reps.len());
        for (a, &r) in reps.iter().enumerate() {
            let k = *index.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[k].push(ElementId::from(a));
            class_of.push(k);
        }
        Partition { class_of, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn same_class(&self, a: ElementId, b: ElementId) -> bool {
        self.class_of[a.index()] == self.class_of[b.index()]
    }
}

/// `(a, b) ∈ ε_I`, using the largest common lower bound `a ∧ b` as witness.
pub fn epsilon_related(b: &BooleanInvSemigroup, i: &AdditiveIdeal, x: ElementId, y: ElementId) -> bool {
    i.contains(b.minus(x, y)) && i.contains(b.minus(y, x))
}

/// `(a, b) ∈ ε_I` straight from the definition: some `c ≤ a, b` with
/// `a \ c` and `b \ c` in `I`.
pub fn epsilon_related_by_definition(b: &BooleanInvSemigroup, i: &AdditiveIdeal, x: ElementId, y: ElementId) -> bool {
    b.down_set(x).iter().filter(|&&c| b.leq(c, y)).any(|&c| {
        i.contains(b.relative_complement(x, c).unwrap()) && i.contains(b.relative_complement(y, c).unwrap())
    })
}

pub fn epsilon_congruence(b: &BooleanInvSemigroup, i: &AdditiveIdeal) -> Partition {
    let reps: Vec<ElementId> = exec::map_range(b.order(), |a| {
        let a = ElementId::from(a);
        b.elements().find(|&c| epsilon_related(b, i, a, c)).expect("ε_I is reflexive")
    });
    Partition::from_representatives(&reps)
}

/// A map between finite semigroups given by the image of each element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MorphismTable {
    pub map: Vec<ElementId>,
}

impl MorphismTable {
    pub fn new(map: Vec<ElementId>) -> Self {
        MorphismTable { map }
    }

    pub fn identity(order: usize) -> Self {
        MorphismTable { map: (0..order).map(ElementId::from).collect() }
    }

    #[inline]
    pub fn apply(&self, a: ElementId) -> ElementId {
        self.map[a.index()]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &MorphismTable) -> MorphismTable {
        MorphismTable { map: self.map.iter().map(|&a| next.apply(a)).collect() }
    }

    pub fn is_injective(&self) -> bool {
        let set: BTreeSet<ElementId> = self.map.iter().copied().collect();
        set.len() == self.map.len()
    }

    pub fn is_surjective(&self, target_order: usize) -> bool {
        let set: BTreeSet<ElementId> = self.map.iter().copied().collect();
        set.len() == target_order
    }

    /// `{a : θ(a) = 0}`.
    pub fn kernel(&self) -> Vec<ElementId> {
        self.map.iter().enumerate().filter(|(_, y)| y.is_zero()).map(|(i, _)| ElementId::from(i)).collect()
    }

    pub fn describe(&self, s: &InverseSemigroupTable, t: &InverseSemigroupTable) -> String {
        let parts: Vec<String> = s.elements().map(|a| format!("{}->{}", s.label(a), t.label(self.apply(a)))).collect();
        parts.join(" ")
    }
}

impl fmt::Display for MorphismTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|a| a.0.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// The quotient `B / ε_I` with its natural surjection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: BooleanInvSemigroup,
    pub surjection: MorphismTable,
    pub partition: Partition,
}

/// Forms `B / ε_I`. Class labels are `[x]` for the least member `x`.
///
/// Joins, meets and differences in the quotient are computed on
/// representatives: `[a] ∧ [b] = [a ∧ b]`, `[a] \ [b] = [a \ b]` and, for
/// compatible classes, `[a] ∨ [b] = [a ▽ b]`.
pub fn quotient_by_ideal(b: &BooleanInvSemigroup, i: &AdditiveIdeal) -> Quotient {
    let partition = epsilon_congruence(b, i);
    let k = partition.len();
    let reps: Vec<ElementId> = partition.classes.iter().map(|c| c[0]).collect();
    let cls = |x: ElementId| ElementId::from(partition.class_of[x.index()]);
    let labels: Vec<String> = reps.iter().map(|&r| format!("[{}]", b.label(r))).collect();
    let products: Vec<ElementId> = exec::map_range(k * k, |p| cls(b.mul(reps[p / k], reps[p % k])));
    let inverse: Vec<ElementId> = reps.iter().map(|&r| cls(b.inv(r))).collect();
    let table = InverseSemigroupTable::from_parts(labels, products, inverse);
    let join: Vec<Option<ElementId>> = exec::map_range(k * k, |p| {
        let (x, y) = (ElementId::from(p / k), ElementId::from(p % k));
        table.compatible(x, y).then(|| cls(b.skew_join(reps[x.index()], reps[y.index()])))
    });
    let meet: Vec<ElementId> = exec::map_range(k * k, |p| cls(b.meet(reps[p / k], reps[p % k])));
    let minus: Vec<ElementId> = exec::map_range(k * k, |p| cls(b.minus(reps[p / k], reps[p % k])));
    let surjection = MorphismTable::new(b.elements().map(cls).collect());
    let algebra = BooleanInvSemigroup::from_parts(table, join, meet, minus, Realization::Quotient);
    Quotient { algebra, surjection, partition }
}

/// Flags computed for a map between Boolean inverse semigroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MorphismFlags {
    pub homomorphism: bool,
    pub additive: bool,
    pub proper: bool,
    pub weakly_meet_preserving: bool,
    pub cover_to_join: bool,
    pub ideal_induced: bool,
}

type Verdict = std::result::Result<(), String>;

/// Zero-preserving and multiplicative; with `unital`, identity to identity.
pub fn check_homomorphism(s: &InverseSemigroupTable, t: &InverseSemigroupTable, m: &MorphismTable, unital: bool) -> Verdict {
    if m.map.len() != s.order() {
        return Err("map length differs from source order".into());
    }
    if !m.apply(ElementId::ZERO).is_zero() {
        return Err("zero not preserved".into());
    }
    if unital {
        if let Some(one) = s.identity() {
            if Some(m.apply(one)) != t.identity() {
                return Err("identity not preserved".into());
            }
        }
    }
    let bad = exec::find_map_first(s.order(), |a| {
        let a = ElementId::from(a);
        s.elements()
            .find(|&b| m.apply(s.mul(a, b)) != t.mul(m.apply(a), m.apply(b)))
            .map(|b| format!("θ({}·{}) != θ({})θ({})", s.label(a), s.label(b), s.label(a), s.label(b)))
    });
    bad.map_or(Ok(()), Err)
}

/// Binary compatible joins existing in the source go to joins.
pub fn check_additive<C: JoinCarrier>(src: &C, tgt: &BooleanInvSemigroup, m: &MorphismTable) -> Verdict {
    let s = src.carrier();
    for a in s.elements() {
        for b in s.elements() {
            if let Some(j) = src.join_pair(a, b) {
                if tgt.join(m.apply(a), m.apply(b)) != Some(m.apply(j)) {
                    return Err(format!("join of {} and {} not preserved", s.label(a), s.label(b)));
                }
            }
        }
    }
    Ok(())
}

/// Closing the image under compatible joins gives the whole target.
pub fn check_proper(tgt: &BooleanInvSemigroup, m: &MorphismTable) -> Verdict {
    let mut have: BTreeSet<ElementId> = m.map.iter().copied().collect();
    loop {
        let current: Vec<ElementId> = have.iter().copied().collect();
        let mut grew = false;
        for &x in &current {
            for &y in &current {
                if let Some(j) = tgt.join(x, y) {
                    grew |= have.insert(j);
                }
            }
        }
        if !grew {
            break;
        }
    }
    if have.len() == tgt.order() {
        Ok(())
    } else {
        let missing = tgt.elements().find(|x| !have.contains(x)).unwrap();
        Err(format!("{} is not a join of image elements", tgt.label(missing)))
    }
}

/// For all `a, b` and `t ≤ θ(a), θ(b)` some `c ≤ a, b` has `t ≤ θ(c)`.
pub fn check_weakly_meet_preserving(s: &InverseSemigroupTable, t: &InverseSemigroupTable, m: &MorphismTable) -> Verdict {
    let bad = exec::find_map_first(s.order(), |a| {
        let a = ElementId::from(a);
        for b in s.elements() {
            let (ta, tb) = (m.apply(a), m.apply(b));
            let lower: Vec<ElementId> = s.down_set(a).iter().copied().filter(|&c| s.leq(c, b)).collect();
            for &x in t.down_set(ta) {
                if t.leq(x, tb) && !lower.iter().any(|&c| t.leq(x, m.apply(c))) {
                    return Some(format!(
                        "{} ≤ θ({}), θ({}) has no lift",
                        t.label(x),
                        s.label(a),
                        s.label(b)
                    ));
                }
            }
        }
        None
    });
    bad.map_or(Ok(()), Err)
}

/// For each listed cover `C → a`, `θ(a) = ⋁ θ(C)`.
pub fn check_cover_to_join(s: &InverseSemigroupTable, covers: &[Cover], tgt: &BooleanInvSemigroup, m: &MorphismTable) -> Verdict {
    for c in covers {
        let images: Vec<ElementId> = c.parts.iter().map(|&p| m.apply(p)).collect();
        if tgt.join_all(&images) != Some(m.apply(c.target)) {
            return Err(format!("cover {} not sent to a join", c.describe(s)));
        }
    }
    Ok(())
}

/// The congruence `θ(a) = θ(b)` equals `ε_ker θ`.
pub fn check_ideal_induced(src: &BooleanInvSemigroup, m: &MorphismTable) -> Verdict {
    let mut mask = vec![false; src.order()];
    for k in m.kernel() {
        mask[k.index()] = true;
    }
    let ker = AdditiveIdeal::from_mask(mask);
    check_additive_ideal(src, &ker).map_err(|w| format!("kernel is not an additive ideal: {w}"))?;
    let bad = exec::find_map_first(src.order(), |a| {
        let a = ElementId::from(a);
        src.elements()
            .find(|&b| (m.apply(a) == m.apply(b)) != epsilon_related(src, &ker, a, b))
            .map(|b| format!("({}, {}) separates Kernel from ε_ker", src.label(a), src.label(b)))
    });
    bad.map_or(Ok(()), Err)
}

/// When `θ(a) ~ θ(b)`, `θ(a) ∨ θ(b) = θ(a ▽ b)`.
pub fn check_skew_join_preserved(src: &BooleanInvSemigroup, tgt: &BooleanInvSemigroup, m: &MorphismTable) -> Verdict {
    for a in src.elements() {
        for b in src.elements() {
            if let Some(j) = tgt.join(m.apply(a), m.apply(b)) {
                if j != m.apply(src.skew_join(a, b)) {
                    return Err(format!("θ({} ▽ {}) is not the join of the images", src.label(a), src.label(b)));
                }
            }
        }
    }
    Ok(())
}

/// `ε_I` is compatible with products and inverses, and its zero class is `I`.
pub fn check_epsilon_congruence(b: &BooleanInvSemigroup, i: &AdditiveIdeal) -> Verdict {
    let p = epsilon_congruence(b, i);
    if p.classes[0] != i.members() {
        return Err("zero class differs from the ideal".into());
    }
    for class in &p.classes {
        for &x in class {
            for &y in class {
                if !p.same_class(b.inv(x), b.inv(y)) {
                    return Err(format!("inverses of {} and {} separate", b.label(x), b.label(y)));
                }
                for s in b.elements() {
                    if !p.same_class(b.mul(s, x), b.mul(s, y)) || !p.same_class(b.mul(x, s), b.mul(y, s)) {
                        return Err(format!("{} and {} separate under {}", b.label(x), b.label(y), b.label(s)));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Computes every flag by exhaustive check.
pub fn classify_morphism(
    src: &BooleanInvSemigroup,
    tgt: &BooleanInvSemigroup,
    m: &MorphismTable,
    unital: bool,
) -> Result<MorphismFlags> {
    let covers = all_minimal_covers(src)?;
    Ok(MorphismFlags {
        homomorphism: check_homomorphism(src, tgt, m, unital).is_ok(),
        additive: check_additive(src, tgt, m).is_ok(),
        proper: check_proper(tgt, m).is_ok(),
        weakly_meet_preserving: check_weakly_meet_preserving(src, tgt, m).is_ok(),
        cover_to_join: check_cover_to_join(src, &covers, tgt, m).is_ok(),
        ideal_induced: check_ideal_induced(src, m).is_ok(),
    })
}

/// Which conditions enumerated maps must satisfy beyond being zero-preserving
/// homomorphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MorphismKind {
    /// Identity goes to identity when the source is a monoid.
    pub unital: bool,
    pub additive: bool,
    pub cover_to_join: bool,
}

impl MorphismKind {
    pub const HOMOMORPHISM: MorphismKind = MorphismKind { unital: false, additive: false, cover_to_join: false };

    pub fn homomorphism(unital: bool) -> Self {
        MorphismKind { unital, ..Self::HOMOMORPHISM }
    }

    pub fn cover_to_join(unital: bool) -> Self {
        MorphismKind { unital, cover_to_join: true, ..Self::HOMOMORPHISM }
    }

    /// Morphism of Boolean inverse semigroups.
    pub fn boolean(unital: bool) -> Self {
        MorphismKind { unital, additive: true, ..Self::HOMOMORPHISM }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub source: usize,
    pub target: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { source: 8, target: 32 }
    }
}

struct Search<'a> {
    s: &'a InverseSemigroupTable,
    t: &'a InverseSemigroupTable,
}

impl Search<'_> {
    /// Extends a partial assignment through products and inverses; false on a
    /// conflict with the map being multiplicative or order-preserving.
    fn propagate(&self, map: &mut [Option<ElementId>]) -> bool {
        let (s, t) = (self.s, self.t);
        loop {
            let mut changed = false;
            let assigned: Vec<ElementId> = s.elements().filter(|a| map[a.index()].is_some()).collect();
            for &a in &assigned {
                let fa = map[a.index()].unwrap();
                let ia = s.inv(a);
                match map[ia.index()] {
                    Some(fi) if fi != t.inv(fa) => return false,
                    Some(_) => {}
                    None => {
                        map[ia.index()] = Some(t.inv(fa));
                        changed = true;
                    }
                }
                for &b in &assigned {
                    let fb = map[b.index()].unwrap();
                    if s.leq(a, b) && !t.leq(fa, fb) {
                        return false;
                    }
                    let p = s.mul(a, b);
                    let fp = t.mul(fa, fb);
                    match map[p.index()] {
                        Some(x) if x != fp => return false,
                        Some(_) => {}
                        None => {
                            map[p.index()] = Some(fp);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn closure(&self, gens: &[ElementId]) -> Vec<bool> {
        let s = self.s;
        let mut have = vec![false; s.order()];
        have[0] = true;
        for &g in gens {
            have[g.index()] = true;
        }
        loop {
            let cur: Vec<ElementId> = s.elements().filter(|a| have[a.index()]).collect();
            let mut changed = false;
            for &a in &cur {
                if !have[s.inv(a).index()] {
                    have[s.inv(a).index()] = true;
                    changed = true;
                }
                for &b in &cur {
                    let p = s.mul(a, b);
                    if !have[p.index()] {
                        have[p.index()] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                return have;
            }
        }
    }

    /// Greedy generating set, larger elements first, after `seed`.
    fn generators(&self, seed: &[ElementId]) -> Vec<ElementId> {
        let s = self.s;
        let mut order: Vec<ElementId> = s.nonzero().collect();
        order.sort_by_key(|&a| (std::cmp::Reverse(s.down_set(a).len()), a));
        let mut gens: Vec<ElementId> = Vec::new();
        let mut all: Vec<ElementId> = seed.to_vec();
        let mut have = self.closure(&all);
        for a in order {
            if !have[a.index()] {
                gens.push(a);
                all.push(a);
                have = self.closure(&all);
            }
        }
        gens
    }

    fn dfs(&self, map: &mut Vec<Option<ElementId>>, gens: &[ElementId], out: &mut Vec<Vec<ElementId>>) {
        let Some((&g, rest)) = gens.split_first() else {
            if map.iter().all(|x| x.is_some()) {
                out.push(map.iter().map(|x| x.unwrap()).collect());
            }
            return;
        };
        if map[g.index()].is_some() {
            self.dfs(map, rest, out);
            return;
        }
        for cand in self.candidates(g) {
            let mut next = map.clone();
            next[g.index()] = Some(cand);
            if self.propagate(&mut next) {
                self.dfs(&mut next, rest, out);
            }
        }
    }

    fn candidates(&self, g: ElementId) -> Vec<ElementId> {
        let idem = self.s.is_idempotent(g);
        self.t.elements().filter(|&x| !idem || self.t.is_idempotent(x)).collect()
    }
}

/// All zero-preserving homomorphisms `S → T` of the requested kind, in
/// lexicographic order of their image vectors.
pub fn enumerate_morphisms<C: JoinCarrier>(
    src: &C,
    tgt: &BooleanInvSemigroup,
    kind: MorphismKind,
    limits: EnumerationLimits,
) -> Result<Vec<MorphismTable>> {
    enumerate_morphisms_with(src, tgt, kind, limits, &[])
}

/// As [`enumerate_morphisms`], restricted to maps agreeing with `fixed`.
pub fn enumerate_morphisms_with<C: JoinCarrier>(
    src: &C,
    tgt: &BooleanInvSemigroup,
    kind: MorphismKind,
    limits: EnumerationLimits,
    fixed: &[(ElementId, ElementId)],
) -> Result<Vec<MorphismTable>> {
    let s = src.carrier();
    if s.order() > limits.source {
        return Err(Error::bound("source order", limits.source));
    }
    if tgt.order() > limits.target {
        return Err(Error::bound("target order", limits.target));
    }
    let search = Search { s, t: tgt.table() };
    let mut map: Vec<Option<ElementId>> = vec![None; s.order()];
    map[0] = Some(ElementId::ZERO);
    let mut seed = Vec::new();
    if kind.unital {
        if let Some(one) = s.identity() {
            match tgt.identity() {
                Some(t_one) => {
                    map[one.index()] = Some(t_one);
                    seed.push(one);
                }
                None => return Ok(Vec::new()),
            }
        }
    }
    for &(a, x) in fixed {
        match map[a.index()] {
            Some(y) if y != x => return Ok(Vec::new()),
            _ => map[a.index()] = Some(x),
        }
        seed.push(a);
    }
    if !search.propagate(&mut map) {
        return Ok(Vec::new());
    }
    let gens = search.generators(&seed);
    let covers = if kind.cover_to_join { all_minimal_covers(s)? } else { Vec::new() };

    let branches: Vec<Vec<Vec<ElementId>>> = match gens.split_first() {
        Some((&g, rest)) if map[g.index()].is_none() => exec::map(&search.candidates(g), |&cand| {
            let mut next = map.clone();
            next[g.index()] = Some(cand);
            let mut out = Vec::new();
            if search.propagate(&mut next) {
                search.dfs(&mut next, rest, &mut out);
            }
            out
        }),
        _ => {
            let mut out = Vec::new();
            search.dfs(&mut map.clone(), &gens, &mut out);
            vec![out]
        }
    };
    let mut result: Vec<MorphismTable> = branches
        .into_iter()
        .flatten()
        .map(MorphismTable::new)
        .filter(|m| check_homomorphism(s, tgt, m, kind.unital).is_ok())
        .filter(|m| !kind.additive || check_additive(src, tgt, m).is_ok())
        .filter(|m| !kind.cover_to_join || check_cover_to_join(s, &covers, tgt, m).is_ok())
        .collect();
    result.sort();
    result.dedup();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn boolean(t: InverseSemigroupTable) -> BooleanInvSemigroup {
        BooleanInvSemigroup::from_table(t).unwrap()
    }

    #[test]
    fn fixtures_that_are_boolean() {
        assert!(BooleanInvSemigroup::from_table(fixtures::i2()).is_ok());
        assert!(BooleanInvSemigroup::from_table(fixtures::sl22()).is_ok());
        assert!(BooleanInvSemigroup::from_table(fixtures::two()).is_ok());
        // e11 ~ e22 with no join: no identity to sit above both
        assert!(BooleanInvSemigroup::from_table(fixtures::b2()).is_err());
        assert!(BooleanInvSemigroup::from_table(fixtures::z2_0()).is_ok());
        // f has no complement below e
        let err = BooleanInvSemigroup::from_table(fixtures::chain3()).unwrap_err();
        assert!(matches!(err, Error::NotBoolean(ref m) if m.contains("complemented")), "{err}");
    }

    #[test]
    fn relative_complement_examples() {
        let b = boolean(fixtures::i2());
        let id = b.id("1>1,2>2");
        assert_eq!(b.relative_complement(id, b.id("1>1")).unwrap(), b.id("2>2"));
        for a in b.elements() {
            assert_eq!(b.relative_complement(a, a).unwrap(), ElementId::ZERO);
            assert_eq!(b.relative_complement(a, ElementId::ZERO).unwrap(), a);
        }
        assert!(b.relative_complement(b.id("1>1"), id).is_err());
    }

    #[test]
    fn relative_complement_is_unique() {
        for t in [fixtures::i2(), fixtures::sl22(), fixtures::z2_0(), fixtures::boolean_algebra(3)] {
            let b = boolean(t);
            for a in b.elements() {
                for &c in b.down_set(a) {
                    let sols: Vec<ElementId> = b
                        .down_set(a)
                        .iter()
                        .copied()
                        .filter(|&x| b.join(x, c) == Some(a) && b.meet(x, c).is_zero())
                        .collect();
                    assert_eq!(sols, vec![b.relative_complement(a, c).unwrap()]);
                }
            }
        }
    }

    #[test]
    fn skew_examples() {
        let b = boolean(fixtures::i2());
        let (id, p) = (b.id("1>1,2>2"), b.id("1>1"));
        assert_eq!(b.skew_difference(id, p), b.id("2>2"));
        assert_eq!(b.skew_join(id, p), id);
        for a in b.elements() {
            assert_eq!(b.skew_difference(a, ElementId::ZERO), a);
        }
    }

    #[test]
    fn skew_conformance_on_fixtures() {
        for t in [fixtures::i2(), fixtures::sl22(), fixtures::z2_0(), fixtures::boolean_algebra(3)] {
            let rep = skew_conformance(&boolean(t));
            assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn range_of_b_variant_disagrees_on_i2() {
        let b = boolean(fixtures::i2());
        // a ⊥ b, so a ⊖ b = a, but r(b) \ r(a)r(b) = 2>2 kills a
        let (x, y) = (b.id("1>1"), b.id("2>2"));
        assert_eq!(b.skew_difference(x, y), x);
        assert_ne!(b.skew_difference_range_of_b(x, y), b.skew_difference(x, y));
        assert!(!skew_conformance(&b).notes.is_empty());
    }

    #[test]
    fn generated_ideals() {
        let b = boolean(fixtures::sl22());
        assert_eq!(additive_ideal_generated(&b, &[]).members(), &[ElementId::ZERO]);
        let full = additive_ideal_generated(&b, &[b.id("1")]);
        assert_eq!(full.len(), 4);
        let i2 = boolean(fixtures::i2());
        assert_eq!(additive_ideal_generated(&i2, &[i2.id("1>2,2>1")]).len(), 7);
        // every additive ideal containing X contains the generated one
        for x in i2.elements() {
            let gen = additive_ideal_generated(&i2, &[x]);
            assert!(check_additive_ideal(&i2, &gen).is_ok());
            for other in all_additive_ideals(&i2).unwrap() {
                if other.contains(x) {
                    assert!(gen.is_subset(&other));
                }
            }
        }
    }

    #[test]
    fn epsilon_matches_definition_and_is_a_congruence() {
        for t in [fixtures::i2(), fixtures::sl22(), fixtures::z2_0(), fixtures::boolean_algebra(3)] {
            let b = boolean(t);
            for i in all_additive_ideals(&b).unwrap() {
                let p = epsilon_congruence(&b, &i);
                for x in b.elements() {
                    for y in b.elements() {
                        assert_eq!(p.same_class(x, y), epsilon_related_by_definition(&b, &i, x, y));
                    }
                }
                assert_eq!(p.classes[0], i.members());
            }
        }
    }

    #[test]
    fn quotient_operations_match_a_scan() {
        for t in [fixtures::i2(), fixtures::boolean_algebra(3), fixtures::sl22()] {
            let b = boolean(t);
            for i in all_additive_ideals(&b).unwrap() {
                let q = quotient_by_ideal(&b, &i);
                let scanned = BooleanInvSemigroup::from_table(q.algebra.table().clone()).unwrap();
                for x in q.algebra.elements() {
                    for y in q.algebra.elements() {
                        assert_eq!(q.algebra.join(x, y), scanned.join(x, y));
                        assert_eq!(q.algebra.meet(x, y), scanned.meet(x, y));
                        assert_eq!(q.algebra.minus(x, y), scanned.minus(x, y));
                    }
                }
                assert_eq!(q.surjection.kernel(), i.members());
            }
        }
    }

    #[test]
    fn zero_ideal_quotient_is_isomorphic() {
        let b = boolean(fixtures::i2());
        let q = quotient_by_ideal(&b, &AdditiveIdeal::zero(b.order()));
        assert_eq!(q.algebra.order(), 7);
        assert!(crate::table::find_isomorphism(&q.algebra, &b).is_some());
    }

    #[test]
    fn classify_examples() {
        let b = boolean(fixtures::sl22());
        let flags = classify_morphism(&b, &b, &MorphismTable::identity(4), true).unwrap();
        assert!(flags.homomorphism && flags.additive && flags.proper);
        assert!(flags.weakly_meet_preserving && flags.cover_to_join && flags.ideal_induced);

        let two = boolean(fixtures::two());
        let incl = MorphismTable::new(vec![ElementId::ZERO, b.id("a")]);
        let flags = classify_morphism(&two, &b, &incl, false).unwrap();
        assert!(flags.homomorphism);
        assert!(!flags.proper);
    }

    #[test]
    fn enumeration_examples() {
        let two = boolean(fixtures::two());
        let c = fixtures::chain3();
        let homs = enumerate_morphisms(&c, &two, MorphismKind::homomorphism(true), Default::default()).unwrap();
        assert_eq!(homs.len(), 2);
        let ctj = enumerate_morphisms(&c, &two, MorphismKind::cover_to_join(true), Default::default()).unwrap();
        assert_eq!(ctj.len(), 1);
        assert!(ctj[0].map.iter().skip(1).all(|&x| x == two.id("1")));
        let one = enumerate_morphisms(&fixtures::two(), &two, MorphismKind::homomorphism(true), Default::default()).unwrap();
        assert_eq!(one.len(), 1);
        // without identity preservation the zero map is a third homomorphism
        let all = enumerate_morphisms(&c, &two, MorphismKind::homomorphism(false), Default::default()).unwrap();
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn enumeration_agrees_with_brute_force() {
        let targets = [boolean(fixtures::two()), boolean(fixtures::sl22()), boolean(fixtures::i2())];
        for fx in fixtures::all() {
            let s = &fx.table;
            for t in &targets {
                for unital in [false, true] {
                    let found = enumerate_morphisms(s, t, MorphismKind::homomorphism(unital), Default::default()).unwrap();
                    // brute force over all maps
                    let n = s.order();
                    let k = t.order();
                    let mut brute = Vec::new();
                    let total = k.pow(n as u32 - 1);
                    for code in 0..total {
                        let mut map = vec![ElementId::ZERO];
                        let mut c = code;
                        for _ in 1..n {
                            map.push(ElementId::from(c % k));
                            c /= k;
                        }
                        let m = MorphismTable::new(map);
                        if check_homomorphism(s, t, &m, unital).is_ok() {
                            brute.push(m);
                        }
                    }
                    brute.sort();
                    assert_eq!(found, brute, "{} -> order {}", fx.name, t.order());
                }
            }
        }
    }

    #[test]
    fn enumeration_bounds() {
        let big = boolean(fixtures::boolean_algebra(3));
        let err = enumerate_morphisms(&big, &big, MorphismKind::HOMOMORPHISM, EnumerationLimits { source: 4, target: 32 });
        assert!(matches!(err, Err(Error::Bound { .. })));
    }
}
