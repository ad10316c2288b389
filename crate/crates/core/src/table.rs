//! Finite inverse semigroups with zero, given by a full multiplication table.
//!
//! Element index 0 is always the zero. All computation is on indices; labels
//! are carried only for reporting.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;

/// Default cap on the size of a closure computed from generators.
pub const DEFAULT_CLOSURE_BOUND: usize = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementId(pub u32);

impl ElementId {
    pub const ZERO: ElementId = ElementId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl From<usize> for ElementId {
    fn from(i: usize) -> Self {
        ElementId(i as u32)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A single axiom failure, with the elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    ZeroNotAbsorbing { x: ElementId },
    NotAssociative { x: ElementId, y: ElementId, z: ElementId },
    NoInverse { x: ElementId },
    NonUniqueInverse { x: ElementId, candidates: Vec<ElementId> },
    IdempotentsDoNotCommute { e: ElementId, f: ElementId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroNotAbsorbing { x } => write!(f, "zero is not absorbing against {x}"),
            Violation::NotAssociative { x, y, z } => {
                write!(f, "({x}{y}){z} != {x}({y}{z})")
            }
            Violation::NoInverse { x } => write!(f, "{x} has no inverse"),
            Violation::NonUniqueInverse { x, candidates } => {
                write!(f, "{x} has {} inverses: {:?}", candidates.len(), candidates)
            }
            Violation::IdempotentsDoNotCommute { e, f: g } => {
                write!(f, "idempotents {e} and {g} do not commute")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub order: usize,
    pub violations: Vec<Violation>,
    pub identity: Option<ElementId>,
    pub unique_inverses: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_monoid(&self) -> bool {
        self.identity.is_some()
    }
}

/// Witnesses recorded per axiom before the scan for that axiom stops.
const WITNESS_CAP: usize = 8;

fn check_format(labels: &[String], rows: &[Vec<usize>]) -> Result<()> {
    let n = labels.len();
    if n == 0 {
        return Err(Error::Format("empty element list".into()));
    }
    if rows.len() != n {
        return Err(Error::Format(format!("{} labels but {} table rows", n, rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Format(format!("row {} has {} entries, expected {}", i, row.len(), n)));
        }
        if let Some(&bad) = row.iter().find(|&&v| v >= n) {
            return Err(Error::Format(format!("row {i} refers to element {bad}, out of range")));
        }
    }
    let mut seen = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if let Some(j) = seen.insert(l.as_str(), i) {
            return Err(Error::Format(format!("label {l:?} used for elements {j} and {i}")));
        }
    }
    Ok(())
}

/// Checks every inverse-semigroup-with-zero axiom exhaustively.
///
/// Malformed input is an `Err`; axiom failures are listed in the report.
pub fn validate_table(labels: &[String], rows: &[Vec<usize>]) -> Result<ValidationReport> {
    check_format(labels, rows)?;
    let n = labels.len();
    let m = |a: usize, b: usize| rows[a][b];
    let mut violations = Vec::new();

    for x in 0..n {
        if m(0, x) != 0 || m(x, 0) != 0 {
            violations.push(Violation::ZeroNotAbsorbing { x: x.into() });
            if violations.len() >= WITNESS_CAP {
                break;
            }
        }
    }

    let assoc: Vec<Violation> = exec::map_range(n, |x| {
        let mut found = Vec::new();
        'outer: for y in 0..n {
            let xy = m(x, y);
            for z in 0..n {
                if m(xy, z) != m(x, m(y, z)) {
                    found.push(Violation::NotAssociative { x: x.into(), y: y.into(), z: z.into() });
                    if found.len() >= WITNESS_CAP {
                        break 'outer;
                    }
                }
            }
        }
        found
    })
    .into_iter()
    .flatten()
    .take(WITNESS_CAP)
    .collect();
    violations.extend(assoc);

    let mut unique_inverses = true;
    let inverse_candidates: Vec<Vec<ElementId>> = exec::map_range(n, |x| {
        (0..n)
            .filter(|&y| m(m(x, y), x) == x && m(m(y, x), y) == y)
            .map(ElementId::from)
            .collect()
    });
    for (x, cands) in inverse_candidates.into_iter().enumerate() {
        match cands.len() {
            0 => {
                unique_inverses = false;
                violations.push(Violation::NoInverse { x: x.into() });
            }
            1 => {}
            _ => {
                unique_inverses = false;
                violations.push(Violation::NonUniqueInverse { x: x.into(), candidates: cands });
            }
        }
    }

    let idempotents: Vec<usize> = (0..n).filter(|&e| m(e, e) == e).collect();
    'idem: for (i, &e) in idempotents.iter().enumerate() {
        for &f in &idempotents[i + 1..] {
            if m(e, f) != m(f, e) {
                violations.push(Violation::IdempotentsDoNotCommute { e: e.into(), f: f.into() });
                break 'idem;
            }
        }
    }

    let identity = (0..n)
        .find(|&i| (0..n).all(|x| m(i, x) == x && m(x, i) == x))
        .map(ElementId::from);

    Ok(ValidationReport { order: n, violations, identity, unique_inverses })
}

/// A finite inverse semigroup with zero at index 0.
#[derive(Debug, Clone)]
pub struct InverseSemigroupTable {
    labels: Vec<String>,
    products: Vec<ElementId>,
    inverse: Vec<ElementId>,
    idempotent: Vec<bool>,
    identity: Option<ElementId>,
    down: OnceLock<Vec<Vec<ElementId>>>,
}

impl PartialEq for InverseSemigroupTable {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.products == other.products
    }
}

impl InverseSemigroupTable {
    /// Builds a validated table. `rows[a][b]` is the index of `a·b`.
    pub fn from_rows(labels: Vec<String>, rows: Vec<Vec<usize>>) -> Result<Self> {
        let report = validate_table(&labels, &rows)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::Axiom(v.to_string()));
        }
        let n = labels.len();
        let products: Vec<ElementId> = rows.iter().flatten().map(|&v| ElementId::from(v)).collect();
        let inverse = (0..n)
            .map(|x| {
                let y = (0..n)
                    .find(|&y| rows[rows[x][y]][x] == x && rows[rows[y][x]][y] == y)
                    .expect("validated table has inverses");
                ElementId::from(y)
            })
            .collect();
        Ok(Self::from_parts(labels, products, inverse))
    }

    /// Assembles a table whose axioms are guaranteed by construction.
    pub(crate) fn from_parts(labels: Vec<String>, products: Vec<ElementId>, inverse: Vec<ElementId>) -> Self {
        let n = labels.len();
        debug_assert_eq!(products.len(), n * n);
        debug_assert_eq!(inverse.len(), n);
        let idempotent: Vec<bool> = (0..n).map(|e| products[e * n + e].index() == e).collect();
        let identity = (0..n)
            .find(|&i| {
                idempotent[i] && (0..n).all(|x| products[i * n + x].index() == x && products[x * n + i].index() == x)
            })
            .map(ElementId::from);
        InverseSemigroupTable { labels, products, inverse, idempotent, identity, down: OnceLock::new() }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.order()).map(ElementId::from)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ElementId> + '_ {
        (1..self.order()).map(ElementId::from)
    }

    pub fn label(&self, a: ElementId) -> &str {
        &self.labels[a.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find(&self, label: &str) -> Option<ElementId> {
        self.labels.iter().position(|l| l == label).map(ElementId::from)
    }

    /// Looks up a label, panicking if it is absent. Intended for fixtures.
    pub fn id(&self, label: &str) -> ElementId {
        self.find(label).unwrap_or_else(|| panic!("no element labelled {label:?}"))
    }

    pub fn identity(&self) -> Option<ElementId> {
        self.identity
    }

    pub fn is_monoid(&self) -> bool {
        self.identity.is_some()
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.products[a.index() * self.order() + b.index()]
    }

    pub fn mul_all(&self, xs: &[ElementId]) -> ElementId {
        let mut it = xs.iter().copied();
        let first = it.next().expect("mul_all of an empty list");
        it.fold(first, |acc, x| self.mul(acc, x))
    }

    #[inline]
    pub fn inv(&self, a: ElementId) -> ElementId {
        self.inverse[a.index()]
    }

    #[inline]
    pub fn d(&self, a: ElementId) -> ElementId {
        self.mul(self.inv(a), a)
    }

    #[inline]
    pub fn r(&self, a: ElementId) -> ElementId {
        self.mul(a, self.inv(a))
    }

    #[inline]
    pub fn is_idempotent(&self, a: ElementId) -> bool {
        self.idempotent[a.index()]
    }

    pub fn idempotents(&self) -> Vec<ElementId> {
        self.elements().filter(|&e| self.is_idempotent(e)).collect()
    }

    /// Natural partial order: `a ≤ b` iff `a = b·a⁻¹a`.
    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.mul(b, self.d(a)) == a
    }

    /// The same order through the other characterisation: `a = e·b` for some
    /// idempotent `e`.
    pub fn leq_via_idempotent(&self, a: ElementId, b: ElementId) -> bool {
        self.elements().any(|e| self.is_idempotent(e) && self.mul(e, b) == a)
    }

    pub fn compatible(&self, s: ElementId, u: ElementId) -> bool {
        self.is_idempotent(self.mul(self.inv(s), u)) && self.is_idempotent(self.mul(s, self.inv(u)))
    }

    pub fn orthogonal(&self, s: ElementId, u: ElementId) -> bool {
        self.mul(self.inv(s), u).is_zero() && self.mul(s, self.inv(u)).is_zero()
    }

    /// Principal order ideal `a↓`, in index order (zero first).
    pub fn down_set(&self, a: ElementId) -> &[ElementId] {
        &self.down.get_or_init(|| {
            exec::map_range(self.order(), |b| {
                let b = ElementId::from(b);
                self.elements().filter(|&x| self.leq(x, b)).collect()
            })
        })[a.index()]
    }

    pub fn up_set(&self, a: ElementId) -> Vec<ElementId> {
        self.elements().filter(|&x| self.leq(a, x)).collect()
    }

    /// Minimal nonzero elements of the semigroup.
    pub fn atoms(&self) -> Vec<ElementId> {
        self.nonzero().filter(|&a| self.down_set(a).len() == 2).collect()
    }

    /// Minimal nonzero elements below `a`.
    pub fn atoms_below(&self, a: ElementId) -> Vec<ElementId> {
        self.down_set(a).iter().copied().filter(|&x| !x.is_zero() && self.down_set(x).len() == 2).collect()
    }

    /// Greatest lower bound of `{s, u}` found by scanning common lower bounds.
    pub fn meet(&self, s: ElementId, u: ElementId) -> Option<ElementId> {
        let common: Vec<ElementId> =
            self.down_set(s).iter().copied().filter(|&x| self.leq(x, u)).collect();
        common.iter().copied().find(|&m| common.iter().all(|&x| self.leq(x, m)))
    }

    /// Least upper bound of a non-empty set, if one exists.
    pub fn join_if_exists(&self, xs: &[ElementId]) -> Option<ElementId> {
        assert!(!xs.is_empty(), "join of an empty set");
        let upper: Vec<ElementId> =
            self.elements().filter(|&u| xs.iter().all(|&x| self.leq(x, u))).collect();
        upper.iter().copied().find(|&j| upper.iter().all(|&u| self.leq(j, u)))
    }

    /// Partition of the nonzero elements into D-classes. Two idempotents are
    /// related when some `x` has `d(x) = e` and `r(x) = f`; an element lives in
    /// the class of its domain idempotent.
    pub fn d_class_partition(&self) -> Vec<Vec<ElementId>> {
        let n = self.order();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for x in self.nonzero() {
            let a = root(&mut parent, self.d(x).index());
            let b = root(&mut parent, self.r(x).index());
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent[hi] = lo;
            }
        }
        let mut classes: BTreeMap<usize, Vec<ElementId>> = BTreeMap::new();
        for x in self.nonzero() {
            let k = root(&mut parent, self.d(x).index());
            classes.entry(k).or_default().push(x);
        }
        let mut out: Vec<Vec<ElementId>> = classes.into_values().collect();
        out.sort_by_key(|c| c[0]);
        out
    }

    pub fn d_related(&self, a: ElementId, b: ElementId) -> bool {
        let (da, db) = (self.d(a), self.d(b));
        self.elements().any(|x| self.d(x) == da && self.r(x) == db)
    }

    /// Row-major rendering of the table as plain indices.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        (0..n).map(|a| (0..n).map(|b| self.products[a * n + b].index()).collect()).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate_table(&self.labels, &self.rows()).expect("well-formed by construction")
    }

    /// Relabels elements without touching the structure.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order() {
            return Err(Error::Format("label count does not match order".into()));
        }
        self.labels = labels;
        Ok(self)
    }
}

/// A partial injective map on `{1..degree}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    degree: usize,
    image: Vec<Option<u8>>,
}

impl PartialBijection {
    /// Builds a map from 1-based `(point, image)` pairs.
    pub fn new(degree: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if degree == 0 || degree > u8::MAX as usize {
            return Err(Error::Format(format!("degree {degree} out of range")));
        }
        let mut image = vec![None; degree];
        let mut hit = vec![false; degree];
        for &(p, q) in pairs {
            if p == 0 || p > degree || q == 0 || q > degree {
                return Err(Error::Format(format!("pair {p}>{q} outside 1..{degree}")));
            }
            if image[p - 1].is_some() {
                return Err(Error::Format(format!("point {p} mapped twice")));
            }
            if hit[q - 1] {
                return Err(Error::Format(format!("image {q} hit twice")));
            }
            image[p - 1] = Some((q - 1) as u8);
            hit[q - 1] = true;
        }
        Ok(PartialBijection { degree, image })
    }

    /// Parses `1>2,2>1`; `0` or the empty string is the empty map.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "0" {
            return Self::new(degree, &[]);
        }
        let mut pairs = Vec::new();
        for part in text.split(',') {
            let (p, q) = part
                .trim()
                .split_once('>')
                .ok_or_else(|| Error::Format(format!("expected point>image, got {part:?}")))?;
            let p = p.trim().parse().map_err(|_| Error::Format(format!("bad point {p:?}")))?;
            let q = q.trim().parse().map_err(|_| Error::Format(format!("bad image {q:?}")))?;
            pairs.push((p, q));
        }
        Self::new(degree, &pairs)
    }

    pub fn empty(degree: usize) -> Self {
        PartialBijection { degree, image: vec![None; degree] }
    }

    pub fn identity(degree: usize) -> Self {
        PartialBijection { degree, image: (0..degree as u8).map(Some).collect() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.image.iter().flatten().count()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.image
            .iter()
            .enumerate()
            .filter_map(|(p, q)| q.map(|q| (p + 1, q as usize + 1)))
            .collect()
    }

    /// `self ∘ other`: apply `other` first. This makes `s⁻¹s` the identity on
    /// the domain of `s`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        let image = other.image.iter().map(|q| q.and_then(|q| self.image[q as usize])).collect();
        PartialBijection { degree: self.degree, image }
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![None; self.degree];
        for (p, q) in self.image.iter().enumerate() {
            if let Some(q) = q {
                image[*q as usize] = Some(p as u8);
            }
        }
        PartialBijection { degree: self.degree, image }
    }
}

impl fmt::Display for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self.pairs();
        if pairs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = pairs.iter().map(|(p, q)| format!("{p}>{q}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Table of a set of maps closed under composition, with `maps[0]` empty.
pub(crate) fn table_of_maps(maps: &[PartialBijection], labels: Vec<String>) -> InverseSemigroupTable {
    let n = maps.len();
    let index: HashMap<&PartialBijection, usize> = maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let products: Vec<ElementId> = exec::map_range(n, |a| {
        (0..n).map(|b| ElementId::from(index[&maps[a].compose(&maps[b])])).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let inverse = maps.iter().map(|m| ElementId::from(index[&m.inverse()])).collect();
    InverseSemigroupTable::from_parts(labels, products, inverse)
}

/// The inverse subsemigroup of the symmetric inverse monoid generated by
/// `gens` and their inverses, with the empty map adjoined as zero.
///
/// Elements appear in breadth-first order of a shortest generating word, and
/// each label is that word (`g1*g2^-1`); the zero is labelled `0`.
pub fn generate_from_partial_bijections(gens: &[PartialBijection], bound: usize) -> Result<InverseSemigroupTable> {
    let degree = match gens.first() {
        Some(g) => g.degree(),
        None => 1,
    };
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::Precondition(format!(
            "generators of mixed degree {} and {}",
            degree,
            g.degree()
        )));
    }
    let mut letters: Vec<(String, PartialBijection)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        letters.push((format!("g{}", i + 1), g.clone()));
        letters.push((format!("g{}^-1", i + 1), g.inverse()));
    }

    let zero = PartialBijection::empty(degree);
    let mut maps = vec![zero.clone()];
    let mut labels = vec!["0".to_string()];
    let mut seen: HashMap<PartialBijection, usize> = HashMap::from([(zero, 0)]);
    let mut queue = VecDeque::new();
    for (name, m) in &letters {
        if !seen.contains_key(m) {
            seen.insert(m.clone(), maps.len());
            maps.push(m.clone());
            labels.push(name.clone());
            queue.push_back(maps.len() - 1);
        }
    }
    while let Some(i) = queue.pop_front() {
        for (name, m) in &letters {
            let p = maps[i].compose(m);
            if !seen.contains_key(&p) {
                if maps.len() >= bound {
                    return Err(Error::bound("generated closure", bound));
                }
                seen.insert(p.clone(), maps.len());
                labels.push(format!("{}*{}", labels[i], name));
                maps.push(p);
                queue.push_back(maps.len() - 1);
            }
        }
    }
    Ok(table_of_maps(&maps, labels))
}

/// The full symmetric inverse monoid on `degree` points, labelled by maps.
pub fn symmetric_inverse_monoid(degree: usize) -> InverseSemigroupTable {
    let mut maps = vec![PartialBijection::empty(degree)];
    let mut current = vec![PartialBijection::empty(degree)];
    for p in 1..=degree {
        let mut next = Vec::new();
        for m in &current {
            next.push(m.clone());
            let used: Vec<usize> = m.pairs().iter().map(|&(_, q)| q).collect();
            for q in 1..=degree {
                if !used.contains(&q) {
                    let mut pairs = m.pairs();
                    pairs.push((p, q));
                    next.push(PartialBijection::new(degree, &pairs).expect("injective by construction"));
                }
            }
        }
        current = next;
    }
    let mut rest: Vec<PartialBijection> = current.into_iter().filter(|m| m.rank() > 0).collect();
    rest.sort_by_key(|m| (m.rank(), m.pairs()));
    maps.extend(rest);
    let labels = maps.iter().map(|m| m.to_string()).collect();
    table_of_maps(&maps, labels)
}

/// Searches for an isomorphism `s → t`, returned as the image of each element
/// of `s`. Backtracks over elements with invariant-based pruning.
pub fn find_isomorphism(s: &InverseSemigroupTable, t: &InverseSemigroupTable) -> Option<Vec<ElementId>> {
    if s.order() != t.order() {
        return None;
    }
    let n = s.order();
    let signature = |g: &InverseSemigroupTable, a: ElementId| {
        (g.is_idempotent(a), g.down_set(a).len(), g.up_set(a).len(), g.down_set(g.d(a)).len())
    };
    let sig_s: Vec<_> = s.elements().map(|a| signature(s, a)).collect();
    let sig_t: Vec<_> = t.elements().map(|a| signature(t, a)).collect();
    let mut sorted_s = sig_s.clone();
    let mut sorted_t = sig_t.clone();
    sorted_s.sort();
    sorted_t.sort();
    if sorted_s != sorted_t {
        return None;
    }

    let mut map: Vec<Option<ElementId>> = vec![None; n];
    let mut used = vec![false; n];
    map[0] = Some(ElementId::ZERO);
    used[0] = true;

    fn consistent(s: &InverseSemigroupTable, t: &InverseSemigroupTable, map: &[Option<ElementId>], a: ElementId) -> bool {
        let fa = map[a.index()].unwrap();
        for b in s.elements() {
            if let Some(fb) = map[b.index()] {
                for (x, y, fx, fy) in [(a, b, fa, fb), (b, a, fb, fa)] {
                    if let Some(fxy) = map[s.mul(x, y).index()] {
                        if fxy != t.mul(fx, fy) {
                            return false;
                        }
                    }
                }
            }
        }
        if let Some(fi) = map[s.inv(a).index()] {
            if fi != t.inv(fa) {
                return false;
            }
        }
        true
    }

    fn go(
        s: &InverseSemigroupTable,
        t: &InverseSemigroupTable,
        sig_s: &[(bool, usize, usize, usize)],
        sig_t: &[(bool, usize, usize, usize)],
        map: &mut Vec<Option<ElementId>>,
        used: &mut Vec<bool>,
        next: usize,
    ) -> bool {
        if next == s.order() {
            return true;
        }
        let a = ElementId::from(next);
        for cand in t.elements() {
            if used[cand.index()] || sig_s[next] != sig_t[cand.index()] {
                continue;
            }
            map[next] = Some(cand);
            used[cand.index()] = true;
            if consistent(s, t, map, a) && go(s, t, sig_s, sig_t, map, used, next + 1) {
                return true;
            }
            map[next] = None;
            used[cand.index()] = false;
        }
        false
    }

    if go(s, t, &sig_s, &sig_t, &mut map, &mut used, 1) {
        Some(map.into_iter().map(|x| x.unwrap()).collect())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn labels(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn chain3_is_a_monoid_with_identity_e() {
        let t = fixtures::chain3();
        let rep = t.validate();
        assert!(rep.is_valid());
        assert_eq!(rep.identity, Some(t.id("e")));
    }

    #[test]
    fn b2_is_valid_and_not_a_monoid() {
        let rep = fixtures::b2().validate();
        assert!(rep.is_valid());
        assert!(!rep.is_monoid());
    }

    #[test]
    fn left_zero_with_zero_has_non_unique_inverses() {
        // {0, a, b} with xy = x for nonzero x, y.
        let rows = vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 2, 2]];
        let rep = validate_table(&labels(&["0", "a", "b"]), &rows).unwrap();
        assert!(!rep.is_valid());
        assert!(!rep.unique_inverses);
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NonUniqueInverse { x, .. } if x.0 == 1)));
        assert!(InverseSemigroupTable::from_rows(labels(&["0", "a", "b"]), rows).is_err());
    }

    #[test]
    fn malformed_tables_are_format_errors() {
        let err = validate_table(&labels(&["0", "a"]), &[vec![0, 0]]).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        let err = validate_table(&labels(&["0", "a"]), &[vec![0, 0], vec![0, 5]]).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
        let err = validate_table(&labels(&["0"]), &[vec![0, 0]]).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn non_associative_table_names_a_triple() {
        // Identity-free magma on {0,a,b} with ab = b, ba = a, aa = b, bb = a.
        let rows = vec![vec![0, 0, 0], vec![0, 2, 2], vec![0, 1, 1]];
        let rep = validate_table(&labels(&["0", "a", "b"]), &rows).unwrap();
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::NotAssociative { .. })));
    }

    #[test]
    fn identity_generator_gives_two_elements() {
        let t = generate_from_partial_bijections(&[PartialBijection::identity(2)], DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(t.order(), 2);
        assert!(t.validate().is_valid());
    }

    #[test]
    fn rank_one_generators_close_to_the_brandt_semigroup() {
        // 1>1 and 1>2 only produce rank <= 1 maps: four of them plus zero.
        let gens = [PartialBijection::parse(2, "1>1").unwrap(), PartialBijection::parse(2, "1>2").unwrap()];
        let t = generate_from_partial_bijections(&gens, DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(t.order(), 5);
        assert!(t.validate().is_valid());
        assert!(find_isomorphism(&t, &fixtures::b2()).is_some());
    }

    #[test]
    fn swap_and_a_rank_one_map_generate_i2() {
        let gens = [PartialBijection::parse(2, "1>1").unwrap(), PartialBijection::parse(2, "1>2,2>1").unwrap()];
        let t = generate_from_partial_bijections(&gens, DEFAULT_CLOSURE_BOUND).unwrap();
        assert_eq!(t.order(), 7);
        assert!(find_isomorphism(&t, &fixtures::i2()).is_some());
    }

    #[test]
    fn swap_generates_z2_with_zero() {
        let t = generate_from_partial_bijections(&[PartialBijection::parse(2, "1>2,2>1").unwrap()], 100).unwrap();
        assert_eq!(t.order(), 3);
        assert!(find_isomorphism(&t, &fixtures::z2_0()).is_some());
    }

    #[test]
    fn closure_bound_is_a_resource_error() {
        let gens = [PartialBijection::parse(3, "1>2,2>3,3>1").unwrap(), PartialBijection::parse(3, "1>1").unwrap()];
        let err = generate_from_partial_bijections(&gens, 4).unwrap_err();
        assert_eq!(err, Error::Bound { what: "generated closure".into(), limit: 4 });
    }

    #[test]
    fn mixed_degrees_are_rejected() {
        let gens = [PartialBijection::identity(2), PartialBijection::identity(3)];
        assert!(matches!(generate_from_partial_bijections(&gens, 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn i2_has_seven_elements() {
        // sum over k of C(2,k)^2 k! = 1 + 4 + 2
        assert_eq!(symmetric_inverse_monoid(2).order(), 7);
        assert_eq!(symmetric_inverse_monoid(3).order(), 34);
    }

    #[test]
    fn natural_order_examples() {
        let c = fixtures::chain3();
        assert!(c.leq(c.id("f"), c.id("e")));
        assert!(!c.leq(c.id("e"), c.id("f")));
        let i2 = fixtures::i2();
        let id = i2.id("1>1,2>2");
        assert!(i2.leq(i2.id("1>1"), id));
        assert!(!i2.leq(i2.id("1>2"), id));
        for t in fixtures::all() {
            for x in t.table.elements() {
                assert!(t.table.leq(ElementId::ZERO, x));
            }
        }
    }

    #[test]
    fn compatibility_examples() {
        let i2 = fixtures::i2();
        let (p, q) = (i2.id("1>1"), i2.id("2>2"));
        assert!(i2.compatible(p, q) && i2.orthogonal(p, q));
        assert!(!i2.compatible(i2.id("1>2"), i2.id("1>1,2>2")));
        for x in i2.elements() {
            assert!(i2.compatible(x, x));
        }
    }

    #[test]
    fn meets_and_joins() {
        let c = fixtures::chain3();
        assert_eq!(c.meet(c.id("e"), c.id("f")), Some(c.id("f")));
        assert_eq!(c.join_if_exists(&[c.id("f")]), Some(c.id("f")));
        let i2 = fixtures::i2();
        let id = i2.id("1>1,2>2");
        assert_eq!(i2.meet(id, i2.id("1>1")), Some(i2.id("1>1")));
        assert_eq!(i2.join_if_exists(&[i2.id("1>1"), i2.id("2>2")]), Some(id));
        let sl = fixtures::sl22();
        assert_eq!(sl.join_if_exists(&[sl.id("a"), sl.id("b")]), Some(sl.id("1")));
        for x in i2.elements() {
            assert_eq!(i2.meet(x, x), Some(x));
        }
    }

    #[test]
    fn no_join_for_incompatible_pair() {
        let i2 = fixtures::i2();
        assert_eq!(i2.join_if_exists(&[i2.id("1>1"), i2.id("1>2")]), None);
    }

    #[test]
    fn idempotents_and_d_classes() {
        let b2 = fixtures::b2();
        assert_eq!(b2.idempotents(), vec![b2.id("0"), b2.id("e11"), b2.id("e22")]);
        let classes = b2.d_class_partition();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].len(), 4);

        let c = fixtures::chain3();
        assert_eq!(c.idempotents().len(), 3);
        assert_eq!(c.d_class_partition(), vec![vec![c.id("f")], vec![c.id("e")]]);
        for e in c.idempotents() {
            assert_eq!(c.d(e), e);
            assert_eq!(c.r(e), e);
        }
    }

    #[test]
    fn partial_bijection_parse_rejects_non_injective() {
        assert!(PartialBijection::parse(2, "1>1,2>1").is_err());
        assert!(PartialBijection::parse(2, "1>3").is_err());
        assert_eq!(PartialBijection::parse(3, "2>3,1>1").unwrap().to_string(), "1>1,2>3");
    }
}
