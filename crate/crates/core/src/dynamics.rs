//! Boundary dynamics at half-tree resolution: ping-pong and wandering
//! certificates, compression and endpoint searches, and the commutator
//! identities behind the monolith arguments.
//!
//! Every containment is decided exactly on half-trees. Searches run
//! breadth-first over reduced words in length-lex order, with letters ordered
//! `a < a⁻¹ < b < b⁻¹ < …`; a word `l₁ … lₘ` denotes `l₁ ∘ … ∘ lₘ`.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::autom::{IsometryClass, TreeAut};
use crate::tree::{ball_at_root, HalfTree, Vertex};

/// Environment variable capping the worker threads used by searches.
pub const WORKERS_ENV: &str = "TREEAUT_WORKERS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("condition {condition} fails{}", witness.as_ref().map(|w| format!(" (witness vertex `{w}`)")).unwrap_or_default())]
    ConditionFailed {
        condition: String,
        witness: Option<String>,
    },
    #[error("no word of length at most {max_len} found")]
    NotFound { max_len: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    fn index(self) -> usize {
        2 * self.gen + self.inverse as usize
    }

    fn from_index(i: usize) -> Self {
        Letter {
            gen: i / 2,
            inverse: i % 2 == 1,
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

/// A word in the generators and their inverses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[1] != w[0].inverse())
    }

    /// Renders as e.g. `a b^-1`; the empty word renders as `1`.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                let name = names.get(l.gen).map(|s| s.as_ref().to_string()).unwrap_or_else(|| format!("g{}", l.gen));
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name
                }
            })
            .collect();
        parts.join(" ")
    }

    /// Parses the rendered form back, given generator names.
    pub fn parse<S: AsRef<str>>(text: &str, names: &[S]) -> Option<Word> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Some(Word::default());
        }
        text.split_whitespace()
            .map(|tok| {
                let (name, inverse) = match tok.strip_suffix("^-1") {
                    Some(n) => (n, true),
                    None => (tok, false),
                };
                names.iter().position(|n| n.as_ref() == name).map(|gen| Letter { gen, inverse })
            })
            .collect::<Option<Vec<_>>>()
            .map(Word)
    }

    pub fn evaluate(&self, gens: &[TreeAut]) -> TreeAut {
        assert!(!gens.is_empty(), "cannot evaluate a word without generators");
        let mut acc = gens[0].group().identity();
        for l in &self.0 {
            let g = if l.inverse { gens[l.gen].inverse() } else { gens[l.gen].clone() };
            acc = acc.compose(&g);
        }
        acc
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..26u8).map(|i| ((b'a' + i) as char).to_string()).collect();
        f.write_str(&self.render(&names))
    }
}

/// Runs `f` on a rayon pool sized by [`WORKERS_ENV`] when it is set.
fn with_workers<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let cap = std::env::var(WORKERS_ENV).ok().and_then(|s| s.parse::<usize>().ok());
    match cap.map(|n| rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()) {
        Some(Ok(pool)) => pool.install(f),
        _ => f(),
    }
}

/// Breadth-first enumeration of reduced words with their values.
struct WordLevels {
    letters: Vec<TreeAut>,
    level: Vec<(Word, TreeAut)>,
}

impl WordLevels {
    fn new(gens: &[TreeAut]) -> Self {
        assert!(!gens.is_empty(), "word searches need at least one generator");
        let group = gens[0].group();
        for g in gens {
            assert!(g.group().pair() == group.pair(), "generators over different local action pairs");
        }
        let letters = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
        WordLevels {
            letters,
            level: vec![(Word::default(), group.identity())],
        }
    }

    fn advance(&mut self) {
        let letters = &self.letters;
        self.level = self
            .level
            .par_iter()
            .flat_map_iter(|(w, e)| {
                let last = w.0.last().copied();
                (0..letters.len()).filter_map(move |i| {
                    let l = Letter::from_index(i);
                    if last.map(|x| x.inverse()) == Some(l) {
                        return None;
                    }
                    let mut word = w.clone();
                    word.0.push(l);
                    Some((word, e.compose(&letters[l.index()])))
                })
            })
            .collect();
    }

    /// The first word up to `max_len`, in length-lex order, satisfying `pred`.
    fn find<P>(mut self, max_len: usize, pred: P) -> Option<(Word, TreeAut)>
    where
        P: Fn(&Word, &TreeAut) -> bool + Sync,
    {
        with_workers(|| {
            for len in 0..=max_len {
                if len > 0 {
                    self.advance();
                }
                if let Some(i) = self.level.par_iter().position_first(|(w, e)| pred(w, e)) {
                    return Some(self.level.swap_remove(i));
                }
            }
            None
        })
    }

    fn all(mut self, max_len: usize) -> Vec<(Word, TreeAut)> {
        with_workers(|| {
            let mut out = self.level.clone();
            for _ in 0..max_len {
                self.advance();
                out.extend(self.level.iter().cloned());
            }
            out
        })
    }
}

/// Reduced words of length at most `max_len` with their values, in length-lex order.
pub fn reduced_words(gens: &[TreeAut], max_len: usize) -> Vec<(Word, TreeAut)> {
    WordLevels::new(gens).all(max_len)
}

pub fn image_halftree(g: &TreeAut, h: &HalfTree) -> HalfTree {
    g.image_halftree(h)
}

/// A vertex of `a` outside `b`, if any.
fn escape_witness(a: &HalfTree, b: &HalfTree, degree: usize) -> Option<Vertex> {
    if a.is_subset_of(b) {
        return None;
    }
    let radius = a.base.len() + b.base.len() + 3;
    a.vertices_within(degree, radius).into_iter().find(|v| !b.contains(v))
}

fn require_subset(a: &HalfTree, b: &HalfTree, degree: usize, condition: String) -> Result<(), DynamicsError> {
    match escape_witness(a, b, degree) {
        None if a.is_subset_of(b) => Ok(()),
        witness => Err(DynamicsError::ConditionFailed {
            condition,
            witness: witness.map(|w| w.render(degree)),
        }),
    }
}

fn require_disjoint(a: &HalfTree, b: &HalfTree, degree: usize, condition: String) -> Result<(), DynamicsError> {
    require_subset(a, &b.complement(), degree, condition)
}

/// Validated ping-pong data for a pair `a, b`: four pairwise disjoint
/// half-trees with `a(Z∖U₋) ⊆ U₊`, `a⁻¹(Z∖U₊) ⊆ U₋` and likewise for `b`.
#[derive(Debug, Clone)]
pub struct PingPongCertificate {
    pub a: TreeAut,
    pub b: TreeAut,
    pub u_minus: HalfTree,
    pub u_plus: HalfTree,
    pub v_minus: HalfTree,
    pub v_plus: HalfTree,
}

const SET_NAMES: [&str; 4] = ["U-", "U+", "V-", "V+"];

impl PingPongCertificate {
    fn sets(&self) -> [&HalfTree; 4] {
        [&self.u_minus, &self.u_plus, &self.v_minus, &self.v_plus]
    }

    pub fn generators(&self) -> [TreeAut; 2] {
        [self.a.clone(), self.b.clone()]
    }
}

pub fn pingpong_certify(
    a: &TreeAut,
    b: &TreeAut,
    u_minus: &HalfTree,
    u_plus: &HalfTree,
    v_minus: &HalfTree,
    v_plus: &HalfTree,
) -> Result<PingPongCertificate, DynamicsError> {
    if a.group().pair() != b.group().pair() {
        return Err(DynamicsError::Precondition("a and b lie over different pairs".into()));
    }
    let cert = PingPongCertificate {
        a: a.clone(),
        b: b.clone(),
        u_minus: u_minus.clone(),
        u_plus: u_plus.clone(),
        v_minus: v_minus.clone(),
        v_plus: v_plus.clone(),
    };
    let d = a.degree();
    let sets = cert.sets();
    for i in 0..4 {
        for j in i + 1..4 {
            require_disjoint(sets[i], sets[j], d, format!("{} ∩ {} = ∅", SET_NAMES[i], SET_NAMES[j]))?;
        }
    }
    let a_inv = a.inverse();
    let b_inv = b.inverse();
    let contractions = [
        (a, u_minus, u_plus, "a(Z∖U-) ⊆ U+"),
        (&a_inv, u_plus, u_minus, "a^-1(Z∖U+) ⊆ U-"),
        (b, v_minus, v_plus, "b(Z∖V-) ⊆ V+"),
        (&b_inv, v_plus, v_minus, "b^-1(Z∖V+) ⊆ V-"),
    ];
    for (g, from, into, name) in contractions {
        require_subset(&g.image_halftree(&from.complement()), into, d, name.to_string())?;
    }
    Ok(cert)
}

/// Checks that every nontrivial reduced word in `a±, b±` of length at most
/// `max_len` moves some vertex of `ball(ε, depth)`; otherwise returns the
/// first word (length-lex) that does not.
pub fn free_no_relation_check(a: &TreeAut, b: &TreeAut, max_len: usize, depth: usize) -> Result<(), Word> {
    let ball = ball_at_root(a.degree(), depth);
    let moves = |e: &TreeAut| ball.iter().any(|v| e.apply(v) != *v);
    match WordLevels::new(&[a.clone(), b.clone()]).find(max_len, |w, e| !w.is_empty() && !moves(e)) {
        Some((w, _)) => Err(w),
        None => Ok(()),
    }
}

#[derive(Debug, Clone)]
pub struct WanderingCertificate {
    pub certificate: PingPongCertificate,
    pub omega: HalfTree,
}

pub fn wandering_certify(cert: &PingPongCertificate, omega: &HalfTree) -> Result<WanderingCertificate, DynamicsError> {
    let d = cert.a.degree();
    for (set, name) in cert.sets().into_iter().zip(SET_NAMES) {
        require_disjoint(omega, set, d, format!("Ω ∩ {name} = ∅"))?;
    }
    let maps = [
        (cert.a.clone(), &cert.u_plus, "a(Ω) ⊆ U+"),
        (cert.a.inverse(), &cert.u_minus, "a^-1(Ω) ⊆ U-"),
        (cert.b.clone(), &cert.v_plus, "b(Ω) ⊆ V+"),
        (cert.b.inverse(), &cert.v_minus, "b^-1(Ω) ⊆ V-"),
    ];
    for (g, into, name) in maps {
        require_subset(&g.image_halftree(omega), into, d, name.to_string())?;
    }
    Ok(WanderingCertificate {
        certificate: cert.clone(),
        omega: omega.clone(),
    })
}

/// Checks `γ(Ω) ∩ γ'(Ω) = ∅` for distinct reduced words of length at most
/// `max_len`, returning the first offending pair.
pub fn wandering_brute_check(cert: &PingPongCertificate, omega: &HalfTree, max_len: usize) -> Result<(), (Word, Word)> {
    let words = reduced_words(&cert.generators(), max_len);
    let images: Vec<HalfTree> = words.iter().map(|(_, e)| e.image_halftree(omega)).collect();
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if !images[i].is_disjoint_from(&images[j]) {
                return Err((words[i].0.clone(), words[j].0.clone()));
            }
        }
    }
    Ok(())
}

/// Some cylinder not meeting any member of `sets`, if the union is not
/// the whole boundary. Membership of ends in a half-tree with base `x` is
/// decided at depth `|x| + 1`, so cylinders of that depth suffice.
pub fn uncovered_cylinder(sets: &[HalfTree], degree: usize) -> Option<HalfTree> {
    let depth = sets.iter().map(|h| h.base.len() + 1).max().unwrap_or(1);
    ball_at_root(degree, depth)
        .into_iter()
        .filter(|w| w.len() == depth)
        .map(|w| HalfTree::cylinder(&w))
        .find(|cyl| sets.iter().all(|h| cyl.is_disjoint_from(h)))
}

/// The length-lex least word `w` with `w(c) ⊆ target` for every `c ∈ sets`.
pub fn compress_search(
    gens: &[TreeAut],
    sets: &[HalfTree],
    target: &HalfTree,
    max_len: usize,
) -> Result<Word, DynamicsError> {
    if gens.is_empty() {
        return Err(DynamicsError::Precondition("no generators".into()));
    }
    if uncovered_cylinder(sets, gens[0].degree()).is_none() {
        return Err(DynamicsError::Precondition("the sets cover the whole boundary".into()));
    }
    WordLevels::new(gens)
        .find(max_len, |_, e| sets.iter().all(|c| e.image_halftree(c).is_subset_of(target)))
        .map(|(w, _)| w)
        .ok_or(DynamicsError::NotFound { max_len })
}

/// The length-lex least hyperbolic word whose attracting end lies in `cyl`.
pub fn hyperbolic_endpoint_in(gens: &[TreeAut], cyl: &HalfTree, max_len: usize) -> Result<Word, DynamicsError> {
    if gens.is_empty() {
        return Err(DynamicsError::NotFound { max_len });
    }
    WordLevels::new(gens)
        .find(max_len, |_, e| match e.classify_isometry() {
            IsometryClass::Hyperbolic { attracting, .. } => cyl.contains_end(&attracting),
            _ => false,
        })
        .map(|(w, _)| w)
        .ok_or(DynamicsError::NotFound { max_len })
}

/// `[g, h] = [h, s]^g · [g, h^s] · [s, h]` with `[x, y] = x y x⁻¹ y⁻¹` and
/// `x^y = y x y⁻¹`; an identity in every group.
pub fn check_commutator_identity(g: &TreeAut, h: &TreeAut, s: &TreeAut) -> bool {
    let lhs = g.commutator(h);
    let rhs = h
        .commutator(s)
        .conjugate_by(g)
        .compose(&g.commutator(&h.conjugate_by(s)))
        .compose(&s.commutator(h));
    lhs.equals(&rhs)
}

/// For `g, h` supported in `Ω` with `Ω ∩ λⁿ(Ω) = ∅`, checks `[[g, λⁿ], h] = [g, h]`.
pub fn check_wandering_commutator(
    g: &TreeAut,
    h: &TreeAut,
    lambda: &TreeAut,
    n: i64,
    omega: &HalfTree,
) -> Result<bool, DynamicsError> {
    let outside = omega.complement();
    for (x, name) in [(g, "g"), (h, "h")] {
        if !x.fixes_halftree(&outside) {
            return Err(DynamicsError::Precondition(format!("{name} is not supported in Ω")));
        }
    }
    let ln = lambda.pow(n);
    if !ln.image_halftree(omega).is_disjoint_from(omega) {
        return Err(DynamicsError::Precondition("Ω meets λ^n(Ω)".into()));
    }
    Ok(g.commutator(&ln).commutator(h).equals(&g.commutator(h)))
}

/// Checks that `γ₁ g γ₁⁻¹` and `γ₂ h γ₂⁻¹` commute for all distinct `γ₁, γ₂`
/// among `words` over the certificate's generators; returns the first
/// failing pair of indices.
pub fn check_wreath_relations(
    cert: &PingPongCertificate,
    words: &[Word],
    g: &TreeAut,
    h: &TreeAut,
) -> Result<(), (usize, usize)> {
    let gens = cert.generators();
    let values: Vec<TreeAut> = words.iter().map(|w| w.evaluate(&gens)).collect();
    for i in 0..values.len() {
        for j in 0..values.len() {
            if i == j || words[i] == words[j] {
                continue;
            }
            let x = g.conjugate_by(&values[i]);
            let y = h.conjugate_by(&values[j]);
            if !x.compose(&y).equals(&y.compose(&x)) {
                return Err((i, j));
            }
        }
    }
    Ok(())
}

/// Half-trees at the given depth disjoint from all of `avoid`, as
/// candidates for a wandering set.
pub fn wandering_candidates(avoid: &[HalfTree], degree: usize, depth: usize) -> Vec<HalfTree> {
    ball_at_root(degree, depth)
        .into_iter()
        .filter(|w| w.len() == depth)
        .map(|w| HalfTree::cylinder(&w))
        .filter(|c| avoid.iter().all(|h| c.is_disjoint_from(h)))
        .collect()
}
