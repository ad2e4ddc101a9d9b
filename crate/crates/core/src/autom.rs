//! Finitary automorphisms of the colored tree with local permutations in `F'`
//! and all but finitely many in `F`.
//!
//! With `F` semi-regular, an element is pinned down by its root image, its
//! local permutation at the root, and the finite set of vertices whose local
//! permutation leaves `F`: everywhere else the local permutation at `v` is the
//! unique `f ∈ F` agreeing with the parent's permutation on the inward color.
//! [`TreeAut`] stores exactly that data, which makes the representation
//! canonical and equality structural.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::perm::{LocalActionPair, Perm};
use crate::tree::{ball_at_root, distance, geodesic_colors, Color, HalfTree, RationalEnd, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("F is not semi-regular; finitary tails are not unique")]
    NotSemiRegular,
    #[error("degree {0} exceeds the supported maximum of 255 colors")]
    DegreeTooLarge(usize),
    #[error("local permutations disagree on edge {parent}–{child} of color {color}")]
    Incompatible {
        parent: String,
        child: String,
        color: Color,
    },
    #[error("local permutation {perm} at vertex `{vertex}` is not in F'")]
    NotInFPrime { vertex: String, perm: String },
    #[error("no element of F extends the local permutation at `{vertex}` along color {color}")]
    InfeasibleTail { vertex: String, color: Color },
    #[error("portrait is missing vertex `{0}` of the ball")]
    MissingVertex(String),
    #[error("portrait has vertex `{0}` outside the ball")]
    ExtraVertex(String),
    #[error("local permutation at `{vertex}` has degree {found}, expected {expected}")]
    WrongDegree {
        vertex: String,
        expected: usize,
        found: usize,
    },
    #[error("element does not fix any edge")]
    NoFixedEdge,
}

/// The ambient group `G(F, F')` for a validated pair with semi-regular `F`.
pub struct TreeGroup {
    pair: LocalActionPair,
    degree: usize,
    /// `tail[b][c]`: the unique `f ∈ F` with `f(b) = c`.
    tail: Vec<Vec<Option<Perm>>>,
    f_elements: HashSet<Perm>,
    fp_elements: Vec<Perm>,
    /// `fp_by[a][c]`: elements of `F'` sending `a` to `c`.
    fp_by: Vec<Vec<Vec<usize>>>,
}

impl fmt::Debug for TreeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TreeGroup")
            .field("degree", &self.degree)
            .field("F", &self.pair.f().generators())
            .field("F'", &self.pair.fp().generators())
            .finish()
    }
}

impl TreeGroup {
    pub fn new(pair: LocalActionPair) -> Result<Arc<Self>, AutError> {
        let degree = pair.degree();
        if degree > Color::MAX as usize + 1 {
            return Err(AutError::DegreeTooLarge(degree));
        }
        if !pair.f().predicates().semiregular {
            return Err(AutError::NotSemiRegular);
        }
        let f_list = pair.f().elements();
        let mut tail = vec![vec![None; degree]; degree];
        for f in &f_list {
            for b in 0..degree {
                tail[b][f.apply(b)] = Some(f.clone());
            }
        }
        let fp_elements = pair.fp().elements();
        let mut fp_by = vec![vec![Vec::new(); degree]; degree];
        for (i, p) in fp_elements.iter().enumerate() {
            for (a, row) in fp_by.iter_mut().enumerate() {
                row[p.apply(a)].push(i);
            }
        }
        Ok(Arc::new(TreeGroup {
            degree,
            tail,
            f_elements: f_list.into_iter().collect(),
            fp_elements,
            fp_by,
            pair,
        }))
    }

    pub fn pair(&self) -> &LocalActionPair {
        &self.pair
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn in_f(&self, p: &Perm) -> bool {
        self.f_elements.contains(p)
    }

    pub fn in_fp(&self, p: &Perm) -> bool {
        self.pair.fp().contains(p)
    }

    /// The local permutation at the child of a vertex with permutation
    /// `parent` reached through color `a`, when the child is not exceptional.
    #[inline]
    fn tail_step(&self, parent: &Perm, a: Color) -> &Perm {
        let a = a as usize;
        self.tail[a][parent.apply(a)]
            .as_ref()
            .expect("validated pairs always admit tails")
    }

    fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || self.pair == other.pair
    }

    pub fn identity(self: &Arc<Self>) -> TreeAut {
        self.translation(Vertex::root())
    }

    /// Left multiplication by the word `t`: all local permutations trivial.
    pub fn translation(self: &Arc<Self>, t: Vertex) -> TreeAut {
        TreeAut {
            group: Arc::clone(self),
            root_image: t,
            root_sigma: Perm::identity(self.degree),
            exceptions: BTreeMap::new(),
        }
    }

    /// Validates a root image together with a portrait on `ball(ε, radius)`.
    pub fn element(
        self: &Arc<Self>,
        root_image: Vertex,
        radius: usize,
        portrait: &BTreeMap<Vertex, Perm>,
    ) -> Result<TreeAut, AutError> {
        let d = self.degree;
        let ball = ball_at_root(d, radius);
        let render = |v: &Vertex| v.render(d);
        for v in portrait.keys() {
            if v.len() > radius || v.word().iter().any(|&a| a as usize >= d) {
                return Err(AutError::ExtraVertex(render(v)));
            }
        }
        if root_image.word().iter().any(|&a| a as usize >= d) {
            return Err(AutError::ExtraVertex(render(&root_image)));
        }
        for v in &ball {
            let p = portrait.get(v).ok_or_else(|| AutError::MissingVertex(render(v)))?;
            if p.degree() != d {
                return Err(AutError::WrongDegree {
                    vertex: render(v),
                    expected: d,
                    found: p.degree(),
                });
            }
            if !self.in_fp(p) {
                return Err(AutError::NotInFPrime {
                    vertex: render(v),
                    perm: p.to_string(),
                });
            }
            if let Some(parent) = v.parent() {
                let a = v.last().unwrap();
                if p.apply(a as usize) != portrait[&parent].apply(a as usize) {
                    return Err(AutError::Incompatible {
                        parent: render(&parent),
                        child: render(v),
                        color: a,
                    });
                }
            }
            if v.len() == radius {
                for b in 0..d as Color {
                    if v.last() == Some(b) {
                        continue;
                    }
                    if self.tail[b as usize][p.apply(b as usize)].is_none() {
                        return Err(AutError::InfeasibleTail {
                            vertex: render(v),
                            color: b,
                        });
                    }
                }
            }
        }
        let root_sigma = portrait[&Vertex::root()].clone();
        let exceptions = portrait
            .iter()
            .filter(|(v, p)| !v.is_root() && !self.in_f(p))
            .map(|(v, p)| (v.clone(), p.clone()))
            .collect();
        Ok(TreeAut {
            group: Arc::clone(self),
            root_image,
            root_sigma,
            exceptions,
        })
    }

    /// Builds an element from an exact local-permutation oracle, recording
    /// exceptions among `candidates` only; every other vertex must follow the tail.
    fn from_sigma<I, S>(self: &Arc<Self>, root_image: Vertex, candidates: I, sigma: S) -> TreeAut
    where
        I: IntoIterator<Item = Vertex>,
        S: Fn(&Vertex) -> Perm,
    {
        let root_sigma = sigma(&Vertex::root());
        let mut exceptions = BTreeMap::new();
        for v in candidates {
            if v.is_root() || exceptions.contains_key(&v) {
                continue;
            }
            let p = sigma(&v);
            if !self.in_f(&p) {
                exceptions.insert(v, p);
            }
        }
        let g = TreeAut {
            group: Arc::clone(self),
            root_image,
            root_sigma,
            exceptions,
        };
        debug_assert!(g.check_invariants().is_ok(), "{:?}", g.check_invariants());
        g
    }

    /// A reproducible element: random root image of length at most `radius`
    /// and a portrait on `ball(ε, radius)` filled breadth-first with uniformly
    /// chosen compatible values of `F'`.
    pub fn random_element(self: &Arc<Self>, radius: usize, seed: u64) -> TreeAut {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.degree;
        let len = rng.gen_range(0..=radius);
        let mut word: Vec<Color> = Vec::with_capacity(len);
        for _ in 0..len {
            loop {
                let a = rng.gen_range(0..d) as Color;
                if word.last() != Some(&a) {
                    word.push(a);
                    break;
                }
            }
        }
        let mut portrait: BTreeMap<Vertex, Perm> = BTreeMap::new();
        for v in ball_at_root(d, radius) {
            let p = match v.parent() {
                None => self.fp_elements.choose(&mut rng).unwrap().clone(),
                Some(parent) => {
                    let a = v.last().unwrap() as usize;
                    let c = portrait[&parent].apply(a);
                    let idx = *self.fp_by[a][c].choose(&mut rng).unwrap();
                    self.fp_elements[idx].clone()
                }
            };
            portrait.insert(v, p);
        }
        self.element(Vertex::from_word(word).unwrap(), radius, &portrait)
            .expect("random portraits are compatible by construction")
    }

    /// A pseudorandom element fixing the half-tree `h` pointwise, with random
    /// local permutations on the other side up to `radius` beyond the edge.
    pub fn fixator_sample(self: &Arc<Self>, h: &HalfTree, radius: usize, seed: u64) -> FixatorSample {
        let mut last = None;
        for attempt in 0..16u64 {
            let g = self.fixator_attempt(h, radius, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(attempt));
            if !g.is_identity() {
                return FixatorSample {
                    element: g,
                    trivial: false,
                };
            }
            last = Some(g);
        }
        FixatorSample {
            element: last.unwrap(),
            trivial: true,
        }
    }

    fn fixator_attempt(self: &Arc<Self>, h: &HalfTree, radius: usize, seed: u64) -> TreeAut {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = self.degree;
        let a = h.dir;
        // Build at the root fixing the half-tree (ε, a), then conjugate by the
        // translation carrying ε to the base of `h`.
        let mut portrait: BTreeMap<Vertex, Perm> = BTreeMap::new();
        let radius = radius.max(1);
        for v in ball_at_root(d, radius) {
            let p = if v.word().first() == Some(&a) {
                Perm::identity(d)
            } else {
                let (from, c) = match v.parent() {
                    None => (a as usize, a as usize),
                    Some(parent) => {
                        let b = v.last().unwrap() as usize;
                        (b, portrait[&parent].apply(b))
                    }
                };
                let idx = *self.fp_by[from][c].choose(&mut rng).unwrap();
                self.fp_elements[idx].clone()
            };
            portrait.insert(v, p);
        }
        let g0 = self
            .element(Vertex::root(), radius, &portrait)
            .expect("fixator portraits are compatible by construction");
        let t = self.translation(h.base.clone());
        t.compose(&g0).compose(&t.inverse())
    }
}

#[derive(Debug, Clone)]
pub struct FixatorSample {
    pub element: TreeAut,
    /// Set when no nontrivial element was produced at this radius.
    pub trivial: bool,
}

/// A finitary automorphism in canonical form.
#[derive(Clone)]
pub struct TreeAut {
    group: Arc<TreeGroup>,
    root_image: Vertex,
    root_sigma: Perm,
    /// Non-root vertices whose local permutation is outside `F`.
    exceptions: BTreeMap<Vertex, Perm>,
}

impl PartialEq for TreeAut {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_as(&other.group)
            && self.root_image == other.root_image
            && self.root_sigma == other.root_sigma
            && self.exceptions == other.exceptions
    }
}

impl Eq for TreeAut {}

impl fmt::Debug for TreeAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TreeAut")
            .field("root_image", &self.root_image)
            .field("root_sigma", &self.root_sigma)
            .field("exceptions", &self.exceptions)
            .finish()
    }
}

/// How an automorphism acts on the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsometryClass {
    Elliptic {
        fixed: Vertex,
    },
    /// Swaps the two endpoints of an edge.
    Inversion {
        edge: (Vertex, Vertex),
    },
    Hyperbolic {
        length: usize,
        axis_vertex: Vertex,
        attracting: RationalEnd,
        repelling: RationalEnd,
    },
}

impl IsometryClass {
    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, IsometryClass::Hyperbolic { .. })
    }
}

impl TreeAut {
    pub fn group(&self) -> &Arc<TreeGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.group.degree
    }

    pub fn root_image(&self) -> &Vertex {
        &self.root_image
    }

    /// Smallest `n` such that every local permutation outside `ball(ε, n)` lies in `F`.
    pub fn radius(&self) -> usize {
        self.exceptions.keys().map(|v| v.len()).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.root_image.is_root() && self.root_sigma.is_identity() && self.exceptions.is_empty()
    }

    fn assert_same_group(&self, other: &TreeAut) {
        assert!(
            self.group.same_as(&other.group),
            "automorphisms over different local action pairs"
        );
    }

    /// The local permutation `σ(g, v)` at any vertex.
    pub fn sigma(&self, v: &Vertex) -> Perm {
        let mut s = &self.root_sigma;
        let radius = self.radius();
        let word = v.word();
        for i in 0..word.len() {
            let prefix = &word[..=i];
            s = if i < radius {
                match self.exceptions.get(prefix) {
                    Some(p) => p,
                    None => self.group.tail_step(s, word[i]),
                }
            } else {
                self.group.tail_step(s, word[i])
            };
        }
        s.clone()
    }

    /// The image of a vertex.
    pub fn apply(&self, v: &Vertex) -> Vertex {
        let mut x = self.root_image.clone();
        let mut s = &self.root_sigma;
        let radius = self.radius();
        let word = v.word();
        for i in 0..word.len() {
            let a = word[i];
            x.step_mut(s.apply(a as usize) as Color);
            if i + 1 < word.len() {
                let prefix = &word[..=i];
                s = if i < radius {
                    match self.exceptions.get(prefix) {
                        Some(p) => p,
                        None => self.group.tail_step(s, a),
                    }
                } else {
                    self.group.tail_step(s, a)
                };
            }
        }
        x
    }

    /// The unique `u` with `g(u) = x`.
    pub fn apply_inverse(&self, x: &Vertex) -> Vertex {
        let mut cursor = SigmaCursor::new(self);
        for c in geodesic_colors(&self.root_image, x) {
            let a = cursor.sigma().inverse().apply(c as usize) as Color;
            cursor.step(a);
        }
        cursor.vertex
    }

    /// `v ↦ self(other(v))`.
    pub fn compose(&self, other: &TreeAut) -> TreeAut {
        self.assert_same_group(other);
        let g = self;
        let h = other;
        let root_image = g.apply(&h.root_image);
        let mut candidates: BTreeSet<Vertex> = h.exceptions.keys().cloned().collect();
        candidates.insert(h.apply_inverse(&Vertex::root()));
        for u in g.exceptions.keys() {
            candidates.insert(h.apply_inverse(u));
        }
        self.group.from_sigma(root_image, candidates, |v| {
            g.sigma(&h.apply(v)).compose(&h.sigma(v))
        })
    }

    pub fn inverse(&self) -> TreeAut {
        let g = self;
        let root_image = g.apply_inverse(&Vertex::root());
        let mut candidates: BTreeSet<Vertex> = g.exceptions.keys().map(|u| g.apply(u)).collect();
        candidates.insert(g.root_image.clone());
        self.group
            .from_sigma(root_image, candidates, |v| g.sigma(&g.apply_inverse(v)).inverse())
    }

    pub fn pow(&self, n: i64) -> TreeAut {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = self.group.identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    /// `y x y⁻¹`, the conjugate of `self` by `y`.
    pub fn conjugate_by(&self, y: &TreeAut) -> TreeAut {
        y.compose(self).compose(&y.inverse())
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`.
    pub fn commutator(&self, y: &TreeAut) -> TreeAut {
        self.compose(y).compose(&self.inverse()).compose(&y.inverse())
    }

    /// Equality via agreement of local permutations on the larger of the two
    /// radii; equivalent to `==` on canonical forms.
    pub fn equals(&self, other: &TreeAut) -> bool {
        if !self.group.same_as(&other.group) || self.root_image != other.root_image {
            return false;
        }
        let r = self.radius().max(other.radius());
        ball_at_root(self.degree(), r)
            .iter()
            .all(|v| self.sigma(v) == other.sigma(v))
    }

    /// The portrait on `ball(ε, radius())`.
    pub fn portrait(&self) -> BTreeMap<Vertex, Perm> {
        self.portrait_at(self.radius())
    }

    pub fn portrait_at(&self, radius: usize) -> BTreeMap<Vertex, Perm> {
        let mut out: BTreeMap<Vertex, Perm> = BTreeMap::new();
        for v in ball_at_root(self.degree(), radius) {
            let p = match (self.exceptions.get(&v), v.parent()) {
                (Some(p), _) => p.clone(),
                (None, None) => self.root_sigma.clone(),
                (None, Some(parent)) => self.group.tail_step(&out[&parent], v.last().unwrap()).clone(),
            };
            out.insert(v, p);
        }
        out
    }

    /// `{v : σ(g, v) ∉ F}`.
    pub fn exceptional_set(&self) -> BTreeSet<Vertex> {
        let mut out: BTreeSet<Vertex> = self.exceptions.keys().cloned().collect();
        if !self.group.in_f(&self.root_sigma) {
            out.insert(Vertex::root());
        }
        out
    }

    /// Membership in `U(F)`.
    pub fn in_uf(&self) -> bool {
        self.exceptional_set().is_empty()
    }

    /// Re-checks the stored data against the defining constraints.
    pub fn check_invariants(&self) -> Result<(), AutError> {
        let d = self.degree();
        let render = |v: &Vertex| v.render(d);
        if !self.group.in_fp(&self.root_sigma) {
            return Err(AutError::NotInFPrime {
                vertex: String::new(),
                perm: self.root_sigma.to_string(),
            });
        }
        for (v, p) in &self.exceptions {
            if !self.group.in_fp(p) {
                return Err(AutError::NotInFPrime {
                    vertex: render(v),
                    perm: p.to_string(),
                });
            }
            if self.group.in_f(p) {
                return Err(AutError::ExtraVertex(render(v)));
            }
            let parent = v.parent().unwrap();
            let a = v.last().unwrap();
            if self.sigma(&parent).apply(a as usize) != p.apply(a as usize) {
                return Err(AutError::Incompatible {
                    parent: render(&parent),
                    child: render(v),
                    color: a,
                });
            }
        }
        Ok(())
    }

    /// Displacement descent from the root, then classification at the minimum.
    pub fn classify_isometry(&self) -> IsometryClass {
        let mut v = Vertex::root();
        let mut disp = distance(&v, &self.apply(&v));
        'descent: loop {
            for a in 0..self.degree() as Color {
                let w = v.neighbor(a);
                let dw = distance(&w, &self.apply(&w));
                if dw < disp {
                    v = w;
                    disp = dw;
                    continue 'descent;
                }
            }
            break;
        }
        let gv = self.apply(&v);
        match disp {
            0 => IsometryClass::Elliptic { fixed: v },
            1 if self.apply(&gv) == v => {
                let edge = if v <= gv { (v, gv) } else { (gv, v) };
                IsometryClass::Inversion { edge }
            }
            length => IsometryClass::Hyperbolic {
                length,
                attracting: self.attracting_end(&v),
                repelling: self.inverse().attracting_end(&v),
                axis_vertex: v,
            },
        }
    }

    /// Attracting end of a hyperbolic element, given the projection `v` of
    /// the root onto its axis. Past the exceptional ball, the pair (local
    /// permutation at `gᵏv`, colors of `[gᵏv, gᵏ⁺¹v]`) evolves by a finite
    /// deterministic rule, so it repeats and the end is eventually periodic.
    fn attracting_end(&self, v: &Vertex) -> RationalEnd {
        let radius = self.radius();
        let mut word: Vec<Color> = v.word().to_vec();
        let mut point = v.clone();
        let mut seen: Vec<((Perm, Vec<Color>), usize)> = Vec::new();
        loop {
            let next = self.apply(&point);
            let seg = geodesic_colors(&point, &next);
            if point.len() >= radius {
                let state = (self.sigma(&point), seg.clone());
                if let Some((_, at)) = seen.iter().find(|(s, _)| *s == state) {
                    let (prefix, period) = word.split_at(*at);
                    return RationalEnd::new(prefix.to_vec(), period.to_vec())
                        .expect("axis rays are reduced and periodic");
                }
                seen.push((state, word.len()));
            }
            word.extend_from_slice(&seg);
            point = next;
        }
    }

    /// Whether `self` fixes every vertex of `h`.
    pub fn fixes_halftree(&self, h: &HalfTree) -> bool {
        let r = self.radius().max(h.base.len() + 1) + 1;
        let id = Perm::identity(self.degree());
        h.vertices_within(self.degree(), r)
            .iter()
            .all(|w| self.apply(w) == *w && self.sigma(w) == id)
    }

    /// For an element fixing an edge `e = (x, y)`, the factors `(g1, g2)` with
    /// `g1` equal to `self` on the `y` side of `e` and trivial on the `x` side,
    /// and `g2` the other way round. The edge is the least-colored fixed edge
    /// at the fixed vertex found by displacement descent.
    pub fn split_at_edge(&self) -> Result<(TreeAut, TreeAut, HalfTree), AutError> {
        let x = match self.classify_isometry() {
            IsometryClass::Elliptic { fixed } => fixed,
            _ => return Err(AutError::NoFixedEdge),
        };
        let dir = (0..self.degree() as Color)
            .find(|&a| self.apply(&x.neighbor(a)) == x.neighbor(a))
            .ok_or(AutError::NoFixedEdge)?;
        let y_side = HalfTree::new(x, dir);
        let x_side = y_side.complement();
        Ok((self.restrict_to(&y_side), self.restrict_to(&x_side), y_side))
    }

    /// Agrees with `self` on `side` and is trivial off it; `self` must fix the
    /// edge bounding `side`.
    fn restrict_to(&self, side: &HalfTree) -> TreeAut {
        let id = Perm::identity(self.degree());
        let root_image = if side.contains(&Vertex::root()) {
            self.root_image.clone()
        } else {
            Vertex::root()
        };
        let mut candidates: Vec<Vertex> = self.exceptions.keys().filter(|v| side.contains(v)).cloned().collect();
        candidates.push(side.head());
        self.group.from_sigma(root_image, candidates, |v| {
            if side.contains(v) {
                self.sigma(v)
            } else {
                id.clone()
            }
        })
    }

    /// Image of a half-tree.
    pub fn image_halftree(&self, h: &HalfTree) -> HalfTree {
        HalfTree::new(
            self.apply(&h.base),
            self.sigma(&h.base).apply(h.dir as usize) as Color,
        )
    }
}

/// Walks the tree keeping the local permutations along the current path.
struct SigmaCursor<'a> {
    g: &'a TreeAut,
    vertex: Vertex,
    stack: Vec<Perm>,
}

impl<'a> SigmaCursor<'a> {
    fn new(g: &'a TreeAut) -> Self {
        SigmaCursor {
            g,
            vertex: Vertex::root(),
            stack: vec![g.root_sigma.clone()],
        }
    }

    fn sigma(&self) -> &Perm {
        self.stack.last().unwrap()
    }

    fn step(&mut self, a: Color) {
        if self.vertex.last() == Some(a) {
            self.vertex.step_mut(a);
            self.stack.pop();
        } else {
            self.vertex.step_mut(a);
            let next = match self.g.exceptions.get(&self.vertex) {
                Some(p) => p.clone(),
                None => self.g.group.tail_step(self.sigma(), a).clone(),
            };
            self.stack.push(next);
        }
    }
}
