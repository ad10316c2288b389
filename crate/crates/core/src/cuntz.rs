//! The polycyclic monoid `Pₙ` and the Cuntz inverse monoid `Cₙ`, its Exel
//! completion, computed symbolically.
//!
//! A path pair `(u, v)` is the partial map `u·w ↦ v·w` on infinite words over
//! `a₁..aₙ`. An element of `Cₙ` is a finite set of path pairs whose first
//! components form a prefix code, as do the second components. It is kept in
//! normal form: no complete sibling family `{(w·aᵢ, x·aᵢ) : 1 ≤ i ≤ n}`
//! occurs, so equality is syntactic.
//!
//! Products compose right to left: `p · q` applies `q` first.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::report::{Check, CheckReport};

/// Letters are `0..n`, printed `a1..an`.
pub type Word = Vec<u8>;

pub const MAX_RANK: usize = 9;

/// Bounds on word length and atom count. The defaults apply to parsed and
/// sampled input; algebraic operations only enforce [`CuntzLimits::HARD`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CuntzLimits {
    pub max_depth: usize,
    pub max_atoms: usize,
}

impl CuntzLimits {
    pub const HARD: CuntzLimits = CuntzLimits { max_depth: 64, max_atoms: 4096 };
}

impl Default for CuntzLimits {
    fn default() -> Self {
        CuntzLimits { max_depth: 12, max_atoms: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PathPair {
    pub u: Word,
    pub v: Word,
}

impl PathPair {
    pub fn new(u: Word, v: Word) -> Self {
        PathPair { u, v }
    }

    pub fn one() -> Self {
        PathPair { u: Vec::new(), v: Vec::new() }
    }

    /// The idempotent `(w, w)`.
    pub fn diagonal(w: Word) -> Self {
        PathPair { u: w.clone(), v: w }
    }

    pub fn inverse(&self) -> Self {
        PathPair { u: self.v.clone(), v: self.u.clone() }
    }
}

impl fmt::Display for PathPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", format_word(&self.u), format_word(&self.v))
    }
}

fn check_rank(n: usize) -> Result<()> {
    if (2..=MAX_RANK).contains(&n) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("rank {n} outside 2..={MAX_RANK}")))
    }
}

/// `e` for the empty word, otherwise `a1a2…`.
pub fn format_word(w: &[u8]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter().map(|&l| format!("a{}", l + 1)).collect()
}

pub fn parse_word(n: usize, text: &str) -> Result<Word> {
    let text = text.trim();
    if text == "e" {
        return Ok(Vec::new());
    }
    let bytes = text.as_bytes();
    if bytes.is_empty() || bytes.len() % 2 != 0 {
        return Err(Error::Format(format!("word {text:?}: expected `e` or letters a1..a{n}")));
    }
    bytes
        .chunks(2)
        .map(|c| match c {
            [b'a', d @ b'1'..=b'9'] if usize::from(d - b'0') <= n => Ok(d - b'1'),
            _ => Err(Error::Format(format!("word {text:?}: expected letters a1..a{n}"))),
        })
        .collect()
}

/// The product `p · q` in `Pₙ`, `None` for zero.
pub fn pn_multiply(p: &PathPair, q: &PathPair) -> Option<PathPair> {
    let (u, v) = (&p.u, &p.v);
    let (x, y) = (&q.u, &q.v);
    if let Some(z) = y.strip_prefix(u.as_slice()) {
        Some(PathPair { u: x.clone(), v: [v.as_slice(), z].concat() })
    } else {
        u.strip_prefix(y.as_slice()).map(|z| PathPair { u: [x.as_slice(), z].concat(), v: v.clone() })
    }
}

fn is_prefix_free(words: &[&Word]) -> bool {
    let mut sorted: Vec<&Word> = words.to_vec();
    sorted.sort();
    sorted.windows(2).all(|w| !w[1].starts_with(w[0]))
}

/// Prefix-free and every internal node on a path to a code word has all `n`
/// children below some code word.
pub fn is_maximal_prefix_code(n: usize, code: &[Word]) -> bool {
    if code.is_empty() || !is_prefix_free(&code.iter().collect::<Vec<_>>()) {
        return false;
    }
    let prefixes: BTreeSet<&[u8]> = code.iter().flat_map(|w| (0..=w.len()).map(move |i| &w[..i])).collect();
    let words: BTreeSet<&[u8]> = code.iter().map(Vec::as_slice).collect();
    prefixes.iter().filter(|p| !words.contains(*p)).all(|p| {
        (0..n as u8).all(|a| {
            let child = [*p, &[a]].concat();
            prefixes.contains(child.as_slice())
        })
    })
}

/// An element of `Cₙ` in normal form. The empty atom set is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CuntzElement {
    n: usize,
    atoms: Vec<PathPair>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JoinOutcome {
    Joined(CuntzElement),
    Incompatible,
}

impl JoinOutcome {
    pub fn joined(self) -> Option<CuntzElement> {
        match self {
            JoinOutcome::Joined(e) => Some(e),
            JoinOutcome::Incompatible => None,
        }
    }
}

fn validate_atoms(n: usize, atoms: &BTreeSet<PathPair>, limits: CuntzLimits) -> Result<()> {
    check_rank(n)?;
    if atoms.len() > limits.max_atoms {
        return Err(Error::bound("atom count", limits.max_atoms));
    }
    for p in atoms {
        if p.u.len().max(p.v.len()) > limits.max_depth {
            return Err(Error::bound(format!("length of a word in {p}"), limits.max_depth));
        }
        if p.u.iter().chain(&p.v).any(|&l| usize::from(l) >= n) {
            return Err(Error::Precondition(format!("{p} uses a letter outside a1..a{n}")));
        }
    }
    let us: Vec<&Word> = atoms.iter().map(|p| &p.u).collect();
    let vs: Vec<&Word> = atoms.iter().map(|p| &p.v).collect();
    if !is_prefix_free(&us) {
        return Err(Error::Precondition("first components do not form a prefix code".into()));
    }
    if !is_prefix_free(&vs) {
        return Err(Error::Precondition("second components do not form a prefix code".into()));
    }
    Ok(())
}

/// Complete sibling families present in `atoms`, each as its merged pair.
fn families(n: usize, atoms: &BTreeSet<PathPair>) -> Vec<PathPair> {
    let full = (1u16 << n) - 1;
    let mut seen: BTreeMap<(&[u8], &[u8]), u16> = BTreeMap::new();
    for p in atoms {
        if let (Some((&a, w)), Some((&b, x))) = (p.u.split_last(), p.v.split_last()) {
            if a == b {
                *seen.entry((w, x)).or_default() |= 1 << a;
            }
        }
    }
    seen.into_iter().filter(|&(_, m)| m == full).map(|((w, x), _)| PathPair::new(w.to_vec(), x.to_vec())).collect()
}

fn merge(n: usize, atoms: &mut BTreeSet<PathPair>, family: &PathPair) {
    for a in 0..n as u8 {
        let mut u = family.u.clone();
        u.push(a);
        let mut v = family.v.clone();
        v.push(a);
        atoms.remove(&PathPair { u, v });
    }
    atoms.insert(family.clone());
}

fn children(n: usize, p: &PathPair) -> impl Iterator<Item = PathPair> + '_ {
    (0..n as u8).map(move |a| {
        let mut u = p.u.clone();
        u.push(a);
        let mut v = p.v.clone();
        v.push(a);
        PathPair { u, v }
    })
}

impl CuntzElement {
    pub fn zero(n: usize) -> Result<Self> {
        check_rank(n)?;
        Ok(CuntzElement { n, atoms: Vec::new() })
    }

    pub fn one(n: usize) -> Result<Self> {
        check_rank(n)?;
        Ok(CuntzElement { n, atoms: vec![PathPair::one()] })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[PathPair] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Longest word among all atoms.
    pub fn depth(&self) -> usize {
        self.atoms.iter().map(|p| p.u.len().max(p.v.len())).max().unwrap_or(0)
    }

    pub fn is_idempotent(&self) -> bool {
        self.atoms.iter().all(|p| p.u == p.v)
    }

    fn same_rank(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::Precondition(format!("ranks {} and {} differ", self.n, other.n)))
        }
    }
}

impl fmt::Display for CuntzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.atoms.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Merges complete sibling families until none remain.
pub fn cuntz_normalize(n: usize, atoms: impl IntoIterator<Item = PathPair>) -> Result<CuntzElement> {
    cuntz_normalize_with(n, atoms, CuntzLimits::HARD)
}

pub fn cuntz_normalize_with(
    n: usize,
    atoms: impl IntoIterator<Item = PathPair>,
    limits: CuntzLimits,
) -> Result<CuntzElement> {
    let mut set: BTreeSet<PathPair> = atoms.into_iter().collect();
    validate_atoms(n, &set, limits)?;
    loop {
        let fams = families(n, &set);
        if fams.is_empty() {
            break;
        }
        for f in &fams {
            merge(n, &mut set, f);
        }
    }
    Ok(CuntzElement { n, atoms: set.into_iter().collect() })
}

/// Normalizes by merging one randomly chosen family at a time. The result
/// must equal [`cuntz_normalize`]; this exists to test that.
pub fn cuntz_normalize_randomized(n: usize, atoms: impl IntoIterator<Item = PathPair>, seed: u64) -> Result<CuntzElement> {
    let mut set: BTreeSet<PathPair> = atoms.into_iter().collect();
    validate_atoms(n, &set, CuntzLimits::HARD)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let fams = families(n, &set);
        let Some(f) = fams.choose(&mut rng) else { break };
        merge(n, &mut set, f);
    }
    Ok(CuntzElement { n, atoms: set.into_iter().collect() })
}

/// `A · B`: every pairwise product of atoms, zeros dropped, normalized.
pub fn cuntz_multiply(a: &CuntzElement, b: &CuntzElement) -> Result<CuntzElement> {
    a.same_rank(b)?;
    let atoms: Vec<PathPair> =
        a.atoms.iter().flat_map(|p| b.atoms.iter().filter_map(move |q| pn_multiply(p, q))).collect();
    cuntz_normalize(a.n, atoms)
}

pub fn cuntz_inverse(a: &CuntzElement) -> CuntzElement {
    let mut atoms: Vec<PathPair> = a.atoms.iter().map(PathPair::inverse).collect();
    atoms.sort();
    CuntzElement { n: a.n, atoms }
}

/// Splits atoms until first components are pairwise equal or incomparable,
/// and likewise second components; then the union is a join exactly when
/// equal first components carry equal second components and vice versa.
pub fn cuntz_join(a: &CuntzElement, b: &CuntzElement) -> Result<JoinOutcome> {
    a.same_rank(b)?;
    let n = a.n;
    let mut atoms: BTreeSet<PathPair> = a.atoms.iter().chain(&b.atoms).cloned().collect();
    loop {
        let split = atoms.iter().find(|p| {
            atoms.iter().any(|q| {
                (q.u.len() > p.u.len() && q.u.starts_with(&p.u)) || (q.v.len() > p.v.len() && q.v.starts_with(&p.v))
            })
        });
        let Some(p) = split.cloned() else { break };
        atoms.remove(&p);
        atoms.extend(children(n, &p));
    }
    let mut by_u: BTreeMap<&Word, &Word> = BTreeMap::new();
    let mut by_v: BTreeMap<&Word, &Word> = BTreeMap::new();
    for p in &atoms {
        if *by_u.entry(&p.u).or_insert(&p.v) != &p.v || *by_v.entry(&p.v).or_insert(&p.u) != &p.u {
            return Ok(JoinOutcome::Incompatible);
        }
    }
    Ok(JoinOutcome::Joined(cuntz_normalize(n, atoms)?))
}

/// Join of many elements; `Incompatible` as soon as one step is.
pub fn cuntz_join_all<'a>(n: usize, xs: impl IntoIterator<Item = &'a CuntzElement>) -> Result<JoinOutcome> {
    let mut acc = CuntzElement::zero(n)?;
    for x in xs {
        match cuntz_join(&acc, x)? {
            JoinOutcome::Joined(j) => acc = j,
            JoinOutcome::Incompatible => return Ok(JoinOutcome::Incompatible),
        }
    }
    Ok(JoinOutcome::Joined(acc))
}

/// `A ≤ B` iff `A = B · A⁻¹A`.
pub fn cuntz_leq(a: &CuntzElement, b: &CuntzElement) -> Result<bool> {
    let d = cuntz_multiply(&cuntz_inverse(a), a)?;
    Ok(cuntz_multiply(b, &d)? == *a)
}

pub fn cuntz_equal(a: &CuntzElement, b: &CuntzElement) -> bool {
    a == b
}

/// `p` as a singleton element of `Cₙ`.
pub fn embed_pn(n: usize, p: &PathPair) -> Result<CuntzElement> {
    cuntz_normalize(n, [p.clone()])
}

/// Image of the length-`k` word `w` under `A`: `v` followed by `w` with `u`
/// removed, truncated to length `k`; `None` where `A` is undefined.
pub fn boundary_action(a: &CuntzElement, w: &[u8], k: usize) -> Result<Option<Word>> {
    if k < a.depth() {
        return Err(Error::Precondition(format!("depth {k} is below the longest atom word {}", a.depth())));
    }
    if w.len() != k {
        return Err(Error::Precondition(format!("word has length {} but depth is {k}", w.len())));
    }
    Ok(a.atoms.iter().find(|p| w.starts_with(&p.u)).map(|p| {
        let mut out = [p.v.as_slice(), &w[p.u.len()..]].concat();
        out.truncate(k);
        out
    }))
}

/// Every word of length `k` over `n` letters, in lexicographic order.
pub fn all_words(n: usize, k: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|w| (0..n as u8).map(move |a| [w.as_slice(), &[a]].concat())).collect();
    }
    out
}

/// Compares `A` and `B` on every word of length `max depth + 2`; the first
/// disagreeing word, if any.
pub fn boundary_disagreement(a: &CuntzElement, b: &CuntzElement) -> Result<Option<Word>> {
    a.same_rank(b)?;
    let k = a.depth().max(b.depth()) + 2;
    for w in all_words(a.n, k) {
        if boundary_action(a, &w, k)? != boundary_action(b, &w, k)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Parses `a1>a1 + a2>a2`, `e>e`, or `0`, and normalizes.
pub fn parse_element(n: usize, text: &str) -> Result<CuntzElement> {
    parse_element_with(n, text, CuntzLimits::default())
}

pub fn parse_element_with(n: usize, text: &str, limits: CuntzLimits) -> Result<CuntzElement> {
    check_rank(n)?;
    let text = text.trim();
    if text == "0" {
        return CuntzElement::zero(n);
    }
    let atoms = text
        .split('+')
        .map(|part| {
            let (u, v) = part
                .split_once('>')
                .ok_or_else(|| Error::Format(format!("atom {:?}: expected `u>v`", part.trim())))?;
            Ok(PathPair::new(parse_word(n, u)?, parse_word(n, v)?))
        })
        .collect::<Result<Vec<_>>>()?;
    cuntz_normalize_with(n, atoms, limits)
}

/// Parses a comma-separated list of words within the default limits.
pub fn parse_code(n: usize, text: &str) -> Result<Vec<Word>> {
    check_rank(n)?;
    let limits = CuntzLimits::default();
    let code: Vec<Word> = text.split(',').map(|w| parse_word(n, w)).collect::<Result<_>>()?;
    if code.len() > limits.max_atoms {
        return Err(Error::bound("words in the code", limits.max_atoms));
    }
    if code.iter().any(|w| w.len() > limits.max_depth) {
        return Err(Error::bound("code word length", limits.max_depth));
    }
    Ok(code)
}

/// The cover `{(p, p) : p ∈ P}` of the identity of `Pₙ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PnCover {
    pub target: PathPair,
    pub parts: Vec<PathPair>,
}

pub fn cover_from_prefix_code(n: usize, code: &[Word]) -> Result<PnCover> {
    check_rank(n)?;
    if !is_maximal_prefix_code(n, code) {
        return Err(Error::Precondition("not a maximal prefix code".into()));
    }
    let mut parts: Vec<PathPair> = code.iter().cloned().map(PathPair::diagonal).collect();
    parts.sort();
    Ok(PnCover { target: PathPair::one(), parts })
}

/// A maximal prefix code grown from `{ε}` by splitting random leaves.
pub fn random_maximal_prefix_code(n: usize, rng: &mut impl Rng, max_words: usize, max_depth: usize) -> Vec<Word> {
    let splits = rng.gen_range(1..=(max_words - 1) / (n - 1));
    let mut code: Vec<Word> = vec![Vec::new()];
    for _ in 0..splits {
        let open: Vec<usize> = (0..code.len()).filter(|&i| code[i].len() < max_depth).collect();
        let Some(&i) = open.choose(rng) else { break };
        let w = code.swap_remove(i);
        code.extend((0..n as u8).map(|a| [w.as_slice(), &[a]].concat()));
    }
    code.sort();
    code
}

/// A random element: a bijection between two random maximal prefix codes of
/// equal size, with some atoms dropped.
pub fn random_element(n: usize, rng: &mut impl Rng, max_words: usize, max_depth: usize) -> Result<CuntzElement> {
    let splits = rng.gen_range(0..=(max_words - 1) / (n - 1));
    let grow = |rng: &mut dyn rand::RngCore| {
        let mut code: Vec<Word> = vec![Vec::new()];
        for _ in 0..splits {
            let open: Vec<usize> = (0..code.len()).filter(|&i| code[i].len() < max_depth).collect();
            if open.is_empty() {
                break;
            }
            let i = open[rng.gen_range(0..open.len())];
            let w = code.swap_remove(i);
            code.extend((0..n as u8).map(|a| [w.as_slice(), &[a]].concat()));
        }
        code
    };
    let dom = grow(rng);
    let mut ran = grow(rng);
    ran.truncate(dom.len());
    ran.shuffle(rng);
    let keep = rng.gen_bool(0.5);
    let atoms: Vec<PathPair> = dom
        .into_iter()
        .zip(ran)
        .filter(|_| keep || rng.gen_bool(0.8))
        .map(|(u, v)| PathPair::new(u, v))
        .collect();
    cuntz_normalize(n, atoms)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CkOptions {
    pub seed: u64,
    pub samples: usize,
    pub max_words: usize,
    pub max_depth: usize,
}

impl Default for CkOptions {
    fn default() -> Self {
        CkOptions { seed: 0, samples: 500, max_words: 64, max_depth: 10 }
    }
}

/// Pairwise orthogonality of `{(p, p)}` and `⋁ (p, p) = 1`.
pub fn verify_prefix_code(n: usize, code: &[Word]) -> Result<std::result::Result<(), String>> {
    let cover = cover_from_prefix_code(n, code)?;
    let parts: Vec<CuntzElement> = cover.parts.iter().map(|p| embed_pn(n, p)).collect::<Result<_>>()?;
    for (i, x) in parts.iter().enumerate() {
        for y in &parts[i + 1..] {
            if !cuntz_multiply(x, y)?.is_zero() {
                return Ok(Err(format!("{x} and {y} are not orthogonal")));
            }
        }
    }
    Ok(match cuntz_join_all(n, &parts)? {
        JoinOutcome::Joined(j) if j == CuntzElement::one(n)? => Ok(()),
        JoinOutcome::Joined(j) => Err(format!("join is {j}")),
        JoinOutcome::Incompatible => Err("parts have no join".into()),
    })
}

/// For `a ∈ Pₙ`, an idempotent `(w, w)` and a maximal prefix code `P`:
/// either `a(w,w)a⁻¹ = 0` or the nonzero `a(wp,wp)a⁻¹` join to it.
fn conjugation_stable(n: usize, a: &PathPair, w: &Word, code: &[Word]) -> Result<std::result::Result<(), String>> {
    let conj = |e: &PathPair| pn_multiply(a, e).and_then(|x| pn_multiply(&x, &a.inverse()));
    let target = conj(&PathPair::diagonal(w.clone()));
    let parts: Vec<PathPair> =
        code.iter().filter_map(|p| conj(&PathPair::diagonal([w.as_slice(), p].concat()))).collect();
    let Some(target) = target else {
        return Ok(if parts.is_empty() { Ok(()) } else { Err(format!("{a} kills (w,w) but not its parts")) });
    };
    let embedded: Vec<CuntzElement> = parts.iter().map(|p| embed_pn(n, p)).collect::<Result<_>>()?;
    Ok(match cuntz_join_all(n, &embedded)? {
        JoinOutcome::Joined(j) if j == embed_pn(n, &target)? => Ok(()),
        _ => Err(format!("conjugating by {a} at {} breaks the cover", format_word(w))),
    })
}

fn random_word(n: usize, rng: &mut impl Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..n as u8)).collect()
}

/// Checks the Cuntz–Krieger relation `⋁_{p ∈ P} (p, p) = 1` on `{a₁..aₙ}`
/// and on random maximal prefix codes, conjugation stability of those
/// covers, and that `embed_pn` is an injective homomorphism on short words.
pub fn verify_ck_relation(n: usize) -> Result<CheckReport> {
    verify_ck_relation_with(n, CkOptions::default())
}

pub fn verify_ck_relation_with(n: usize, opts: CkOptions) -> Result<CheckReport> {
    check_rank(n)?;
    let limits = CuntzLimits::default();
    if opts.max_words > limits.max_atoms {
        return Err(Error::bound("words per code", limits.max_atoms));
    }
    if opts.max_depth > limits.max_depth {
        return Err(Error::bound("code depth", limits.max_depth));
    }
    let mut rep = CheckReport::new(format!("Cuntz–Krieger relation in C{n}"));
    rep.note(format!("seed {}", opts.seed));
    rep.note("every maximal prefix code is checked to give a cover of 1; the converse is taken as given");

    let basic: Vec<Word> = (0..n as u8).map(|a| vec![a]).collect();
    let v = verify_prefix_code(n, &basic)?;
    rep.push(Check::single("a₁a₁⁻¹ ∨ … ∨ aₙaₙ⁻¹ = 1", v.is_ok(), || v.clone().unwrap_err()));

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let codes: Vec<Vec<Word>> =
        (0..opts.samples).map(|_| random_maximal_prefix_code(n, &mut rng, opts.max_words, opts.max_depth)).collect();
    let conjugators: Vec<(PathPair, Word)> = (0..opts.samples)
        .map(|_| (PathPair::new(random_word(n, &mut rng, 3), random_word(n, &mut rng, 3)), random_word(n, &mut rng, 2)))
        .collect();
    let largest = codes.iter().map(Vec::len).max().unwrap_or(0);
    let deepest = codes.iter().flatten().map(Vec::len).max().unwrap_or(0);
    rep.note(format!("{} random codes, up to {largest} words and depth {deepest}", codes.len()));

    let results = exec::map_range(codes.len(), |i| -> Result<[Option<String>; 3]> {
        let code = &codes[i];
        let shown = || code.iter().map(|w| format_word(w)).collect::<Vec<_>>().join(",");
        let maximal = (!is_maximal_prefix_code(n, code)).then(|| shown());
        let relation = verify_prefix_code(n, code)?.err().map(|w| format!("{}: {w}", shown()));
        let (a, w) = &conjugators[i];
        let stable = conjugation_stable(n, a, w, code)?.err().map(|w| format!("{}: {w}", shown()));
        Ok([maximal, relation, stable])
    });
    let results: Vec<[Option<String>; 3]> = results.into_iter().collect::<Result<_>>()?;
    let first = |k: usize| results.iter().find_map(|r| r[k].clone());
    rep.push(Check::new("sampled codes are maximal prefix codes", codes.len(), first(0)));
    rep.push(Check::new("sampled codes give orthogonal idempotents joining to 1", codes.len(), first(1)));
    rep.push(Check::new("conjugates of a cover cover the conjugate", codes.len(), first(2)));

    // exhaustive over words up to the longest length keeping at most 1024 pairs
    let max_len = (1..=4).rev().find(|&l| (0..=l).map(|k| n.pow(k as u32)).sum::<usize>().pow(2) <= 1024).unwrap_or(1);
    let words: Vec<Word> = (0..=max_len).flat_map(|k| all_words(n, k)).collect();
    let pairs: Vec<PathPair> =
        words.iter().flat_map(|u| words.iter().map(move |v| PathPair::new(u.clone(), v.clone()))).collect();
    let embedded: Vec<CuntzElement> = pairs.iter().map(|p| embed_pn(n, p)).collect::<Result<_>>()?;
    rep.note(format!("embedding checked on all path pairs with words of length at most {max_len}"));
    let distinct: BTreeSet<&CuntzElement> = embedded.iter().collect();
    rep.push(Check::single("embedding of Pₙ is injective", distinct.len() == pairs.len(), || {
        format!("{} images for {} pairs", distinct.len(), pairs.len())
    }));
    let zero = CuntzElement::zero(n)?;
    let hom = exec::find_map_first(pairs.len(), |i| {
        for j in 0..pairs.len() {
            let expected = pn_multiply(&pairs[i], &pairs[j]).map_or_else(|| Ok(zero.clone()), |p| embed_pn(n, &p));
            let got = cuntz_multiply(&embedded[i], &embedded[j]);
            match (expected, got) {
                (Ok(e), Ok(g)) if e == g => {}
                _ => return Some(format!("{} · {}", pairs[i], pairs[j])),
            }
        }
        None
    });
    rep.push(Check::new("embedding of Pₙ is multiplicative", pairs.len() * pairs.len(), hom));
    Ok(rep)
}

/// `cuntz_equal` against the boundary oracle on `count` random pairs. Half
/// of the pairs are equal by construction: `B = A · (C C⁻¹)` with `C` total
/// and surjective, or a refinement of `A`.
pub fn verify_equality_oracle(n: usize, count: usize, seed: u64) -> Result<CheckReport> {
    check_rank(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(count);
    for i in 0..count {
        let a = random_element(n, &mut rng, 8, 4)?;
        let b = match i % 4 {
            0 => random_element(n, &mut rng, 8, 4)?,
            1 => {
                let c = random_element(n, &mut rng, 8, 4)?;
                cuntz_multiply(&a, &cuntz_multiply(&c, &cuntz_inverse(&c))?)?
            }
            2 => {
                let code = random_maximal_prefix_code(n, &mut rng, 8, 4);
                let refined: Vec<PathPair> = a
                    .atoms()
                    .iter()
                    .flat_map(|p| code.iter().map(move |w| PathPair::new([p.u.as_slice(), w].concat(), [p.v.as_slice(), w].concat())))
                    .collect();
                cuntz_normalize(n, refined)?
            }
            _ => {
                let t = random_total(n, &mut rng)?;
                cuntz_multiply(&cuntz_multiply(&a, &t)?, &cuntz_inverse(&t))?
            }
        };
        pairs.push((a, b));
    }
    let results = exec::map(&pairs, |(a, b)| -> Result<(bool, Option<Word>)> { Ok((a == b, boundary_disagreement(a, b)?)) });
    let results: Vec<(bool, Option<Word>)> = results.into_iter().collect::<Result<_>>()?;
    let equal = results.iter().filter(|r| r.0).count();
    let mut rep = CheckReport::new(format!("normal-form equality against the boundary action in C{n}"));
    rep.note(format!("seed {seed}, {count} pairs, {equal} equal"));
    let witness = results.iter().zip(&pairs).find_map(|((eq, dis), (a, b))| {
        (*eq != dis.is_none()).then(|| format!("{a} against {b}"))
    });
    rep.push(Check::new("equal normal forms iff equal boundary action", count, witness));
    Ok(rep)
}

/// A bijection between two maximal prefix codes, defined everywhere with
/// full image.
fn random_total(n: usize, rng: &mut impl Rng) -> Result<CuntzElement> {
    loop {
        let dom = random_maximal_prefix_code(n, rng, 8, 4);
        let mut ran = random_maximal_prefix_code(n, rng, 8, 4);
        if ran.len() == dom.len() {
            ran.shuffle(rng);
            return cuntz_normalize(n, dom.into_iter().zip(ran).map(|(u, v)| PathPair::new(u, v)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str) -> Word {
        parse_word(9, text).unwrap()
    }

    fn el(n: usize, text: &str) -> CuntzElement {
        parse_element(n, text).unwrap()
    }

    #[test]
    fn pn_products() {
        let p = |u: &str, v: &str| PathPair::new(w(u), w(v));
        assert_eq!(pn_multiply(&p("e", "a1"), &p("e", "a2")), Some(p("e", "a1a2")));
        assert_eq!(pn_multiply(&p("a1", "e"), &p("a2", "e")), Some(p("a2a1", "e")));
        assert_eq!(pn_multiply(&p("a1", "e"), &p("e", "a2")), None);
        assert_eq!(pn_multiply(&p("a1", "e"), &p("e", "a1")), Some(p("e", "e")));
    }

    #[test]
    fn maximal_prefix_codes() {
        assert!(is_maximal_prefix_code(2, &[w("a1"), w("a2")]));
        assert!(is_maximal_prefix_code(2, &[w("a1"), w("a2a1"), w("a2a2")]));
        assert!(!is_maximal_prefix_code(2, &[w("a1")]));
        assert!(is_maximal_prefix_code(2, &[w("e")]));
        assert!(!is_maximal_prefix_code(2, &[w("a1"), w("a1a2"), w("a2")]));
        assert!(!is_maximal_prefix_code(3, &[w("a1"), w("a2")]));
        assert!(cover_from_prefix_code(2, &[w("a1")]).is_err());
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(el(2, "a1>a1 + a2>a2"), CuntzElement::one(2).unwrap());
        assert_eq!(el(2, "a1>a2 + a2>a1").atoms().len(), 2);
        assert_eq!(el(2, "e>e").to_string(), "e>e");
        assert_eq!(el(2, "a1>a1 + a2a1>a2a1 + a2a2>a2a2"), CuntzElement::one(2).unwrap());
        assert_eq!(el(2, "a1>a1a1 + a2>a1a2").to_string(), "e>a1");
        assert!(parse_element(2, "a1>a1 + a1a2>a2").is_err());
        assert!(parse_element(2, "a1>a1 + a2>a1a1").is_err());
        assert!(parse_element(2, "a3>a1").is_err());
    }

    #[test]
    fn joins() {
        let one = CuntzElement::one(2).unwrap();
        let j = cuntz_join(&el(2, "a1>a1"), &el(2, "a2>a2")).unwrap();
        assert_eq!(j, JoinOutcome::Joined(one.clone()));
        let j = cuntz_join(&el(2, "e>e"), &el(2, "a1>a1")).unwrap();
        assert_eq!(j, JoinOutcome::Joined(one.clone()));
        assert_eq!(cuntz_join(&el(2, "a1>a1"), &el(2, "a1>a2")).unwrap(), JoinOutcome::Incompatible);
        assert_eq!(cuntz_join(&el(2, "a1>a1"), &el(2, "a2>a1a1")).unwrap(), JoinOutcome::Incompatible);
        assert_eq!(cuntz_join(&el(2, "0"), &el(2, "a1>a2")).unwrap().joined().unwrap(), el(2, "a1>a2"));
    }

    #[test]
    fn order_and_identity() {
        let one = CuntzElement::one(2).unwrap();
        let a = el(2, "a1>a2 + a2a1>a1");
        assert_eq!(cuntz_multiply(&one, &a).unwrap(), a);
        assert_eq!(cuntz_multiply(&a, &one).unwrap(), a);
        assert!(cuntz_leq(&el(2, "a1>a1"), &one).unwrap());
        assert!(!cuntz_leq(&one, &el(2, "a1>a1")).unwrap());
        assert!(cuntz_leq(&el(2, "a1a1>a2a1"), &el(2, "a1>a2")).unwrap());
    }

    #[test]
    fn boundary_action_examples() {
        let one = CuntzElement::one(2).unwrap();
        assert_eq!(boundary_action(&one, &w("a1a2a1"), 3).unwrap(), Some(w("a1a2a1")));
        let a = el(2, "a1>a2");
        assert_eq!(boundary_action(&a, &w("a1a1"), 2).unwrap(), Some(w("a2a1")));
        assert_eq!(boundary_action(&a, &w("a2a2"), 2).unwrap(), None);
        assert!(boundary_action(&el(2, "a1a1>a2"), &w("a1"), 1).is_err());
    }

    #[test]
    fn parse_print_round_trip() {
        for text in ["0", "e>e", "a1>a2 + a2>a1", "a1a2>e", "a1>a3a3 + a2>a1 + a3>a2"] {
            let n = 3;
            let e = el(n, text);
            assert_eq!(parse_element(n, &e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn ck_relation_examples() {
        assert!(verify_prefix_code(2, &[w("a1"), w("a2")]).unwrap().is_ok());
        assert!(verify_prefix_code(2, &[w("a1"), w("a2a1"), w("a2a2")]).unwrap().is_ok());
        assert!(verify_prefix_code(3, &[w("a1"), w("a2"), w("a3")]).unwrap().is_ok());
        let rep = verify_ck_relation_with(2, CkOptions { samples: 40, ..Default::default() }).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn normalization_is_confluent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for seed in 0..200 {
            let n = 2 + (seed as usize % 2);
            let a = random_element(n, &mut rng, 8, 3).unwrap();
            let code = random_maximal_prefix_code(n, &mut rng, 9, 3);
            let refined: Vec<PathPair> = a
                .atoms()
                .iter()
                .flat_map(|p| code.iter().map(move |c| PathPair::new([p.u.as_slice(), c].concat(), [p.v.as_slice(), c].concat())))
                .collect();
            let direct = cuntz_normalize(n, refined.clone()).unwrap();
            assert_eq!(direct, a);
            assert_eq!(cuntz_normalize_randomized(n, refined, seed).unwrap(), direct);
        }
    }

    #[test]
    fn equality_matches_boundary_action() {
        for n in [2, 3] {
            let rep = verify_equality_oracle(n, 100, 5).unwrap();
            assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    fn arb_element(n: usize) -> impl Strategy<Value = CuntzElement> {
        any::<u64>().prop_map(move |s| random_element(n, &mut ChaCha8Rng::seed_from_u64(s), 6, 3).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn multiplication_is_associative(a in arb_element(2), b in arb_element(2), c in arb_element(2)) {
            let left = cuntz_multiply(&cuntz_multiply(&a, &b).unwrap(), &c).unwrap();
            let right = cuntz_multiply(&a, &cuntz_multiply(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_laws(a in arb_element(3)) {
            let ai = cuntz_inverse(&a);
            prop_assert_eq!(cuntz_multiply(&cuntz_multiply(&a, &ai).unwrap(), &a).unwrap(), a.clone());
            prop_assert_eq!(cuntz_multiply(&cuntz_multiply(&ai, &a).unwrap(), &ai).unwrap(), ai);
        }

        #[test]
        fn product_acts_as_composition(a in arb_element(2), b in arb_element(2)) {
            let ab = cuntz_multiply(&a, &b).unwrap();
            let k = a.depth() + b.depth() + ab.depth() + 2;
            for w in all_words(2, k) {
                let direct = boundary_action(&ab, &w, k).unwrap();
                let Some(x) = boundary_action(&b, &w, k).unwrap() else {
                    prop_assert!(direct.is_none());
                    continue;
                };
                if x.len() < a.depth() {
                    continue;
                }
                match (direct, boundary_action(&a, &x, x.len()).unwrap()) {
                    (Some(d), Some(v)) => {
                        let m = d.len().min(v.len());
                        prop_assert_eq!(&d[..m], &v[..m]);
                    }
                    (d, v) => prop_assert_eq!(d.is_some(), v.is_some()),
                }
            }
        }
    }
}
