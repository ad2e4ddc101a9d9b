//! Finite permutation groups: parsing, stabilizer chains, orbits and the
//! structural predicates needed to analyse a local action pair `F <= F'`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("malformed cycle notation at byte {pos}: {msg} (token `{token}`)")]
    Syntax {
        pos: usize,
        token: String,
        msg: &'static str,
    },
    #[error("point {point} is out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {point} appears more than once")]
    RepeatedPoint { point: usize },
    #[error("image list is not a bijection of 0..{degree}")]
    NotBijection { degree: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("local action pairs need degree at least 3, got {0}")]
    DegreeTooSmall(usize),
    #[error("generator {generator} of F is not contained in F'")]
    NotContained { generator: String },
    #[error(
        "generator {generator} of F' does not map the F-orbit {orbit:?} onto itself{}",
        if *weak_only { " (it only permutes the F-orbits)" } else { "" }
    )]
    OrbitNotPreserved {
        generator: String,
        orbit: Vec<usize>,
        /// Set when `F'` still permutes the `F`-orbits among themselves.
        weak_only: bool,
    },
}

/// A permutation of `{0, .., d-1}` stored by its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &x in &images {
            if x >= degree || seen[x] {
                return Err(PermError::NotBijection { degree });
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation from disjoint cycles given as point lists.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for &p in cycle.iter() {
                if p >= degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if seen[p] {
                    return Err(PermError::RepeatedPoint { point: p });
                }
                seen[p] = true;
            }
            for (i, &p) in cycle.iter().enumerate() {
                images[p] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    /// Parses 0-based disjoint cycle notation such as `(0 1)(2 3)`; `()` is the
    /// identity. Points inside a cycle are separated by whitespace or commas.
    pub fn parse(text: &str, degree: usize) -> Result<Self, PermError> {
        let bytes = text.as_bytes();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        skip_ws(&mut i);
        if i == bytes.len() {
            return Err(PermError::Syntax {
                pos: 0,
                token: String::new(),
                msg: "empty permutation; use `()` for the identity",
            });
        }
        while i < bytes.len() {
            if bytes[i] != b'(' {
                return Err(syntax(text, i, "expected `(`"));
            }
            i += 1;
            let mut cycle = Vec::new();
            loop {
                while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b',') {
                    i += 1;
                }
                if i == bytes.len() {
                    return Err(syntax(text, i, "unterminated cycle"));
                }
                if bytes[i] == b')' {
                    i += 1;
                    break;
                }
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(syntax(text, start, "expected a point index"));
                }
                let point: usize = text[start..i]
                    .parse()
                    .map_err(|_| syntax(text, start, "point index does not fit"))?;
                cycle.push(point);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            skip_ws(&mut i);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Perm::from_cycles(degree, &refs)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Least point moved, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, x)| *i != **x).map(|(i, _)| i)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().enumerate().filter(|(i, x)| *i == **x).map(|(i, _)| i)
    }

    /// Restriction to the first `degree` points; caller guarantees they are invariant.
    pub fn restrict(&self, degree: usize) -> Perm {
        Perm {
            images: self.images[..degree].to_vec(),
        }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }
}

fn syntax(text: &str, pos: usize, msg: &'static str) -> PermError {
    let token: String = text[pos.min(text.len())..]
        .chars()
        .take_while(|c| !c.is_ascii_whitespace())
        .take(8)
        .collect();
    PermError::Syntax { pos, token, msg }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

/// One level of a stabilizer chain.
#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    /// `transversal[p] = u` with `u(base) = p`, for `p` in the basic orbit.
    transversal: HashMap<usize, Perm>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, gens: Vec<Perm>, degree: usize) -> Self {
        let mut level = Level {
            base,
            gens,
            transversal: HashMap::new(),
            orbit: Vec::new(),
        };
        level.rebuild(degree);
        level
    }

    fn rebuild(&mut self, degree: usize) {
        self.transversal.clear();
        self.orbit.clear();
        self.transversal.insert(self.base, Perm::identity(degree));
        self.orbit.push(self.base);
        let mut i = 0;
        while i < self.orbit.len() {
            let p = self.orbit[i];
            let u = self.transversal[&p].clone();
            for s in &self.gens {
                let q = s.apply(p);
                if let std::collections::hash_map::Entry::Vacant(e) = self.transversal.entry(q) {
                    e.insert(s.compose(&u));
                    self.orbit.push(q);
                }
            }
            i += 1;
        }
    }
}

/// A permutation group with a base and strong generating set.
///
/// The base starts with an optional caller-supplied prefix and is otherwise
/// extended by the least point moved by the element that forces a new level,
/// so the chain is a deterministic function of the generator list.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .field("order", &self.order())
            .finish()
    }
}

impl PartialEq for PermGroup {
    /// Equality as subgroups of `Sym(d)`.
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && self.generators.iter().all(|g| other.contains(g))
    }
}

impl Eq for PermGroup {}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self, PermError> {
        Self::with_base_prefix(degree, generators, &[])
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            levels: Vec::new(),
        }
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Perm::from_cycles(degree, &[&[0, 1]]).unwrap());
        }
        if degree >= 3 {
            let cyc: Vec<usize> = (0..degree).collect();
            gens.push(Perm::from_cycles(degree, &[&cyc]).unwrap());
        }
        PermGroup::new(degree, gens).unwrap()
    }

    /// Parses each generator from cycle notation.
    pub fn from_cycle_strings<S: AsRef<str>>(degree: usize, gens: &[S]) -> Result<Self, PermError> {
        let perms = gens
            .iter()
            .map(|s| Perm::parse(s.as_ref(), degree))
            .collect::<Result<Vec<_>, _>>()?;
        PermGroup::new(degree, perms)
    }

    /// Schreier–Sims with the given points placed first in the base.
    pub fn with_base_prefix(
        degree: usize,
        generators: Vec<Perm>,
        prefix: &[usize],
    ) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        for &p in prefix {
            if p >= degree {
                return Err(PermError::PointOutOfRange { point: p, degree });
            }
        }
        let mut group = PermGroup {
            degree,
            generators: generators.clone(),
            levels: Vec::new(),
        };
        group.schreier_sims(prefix);
        Ok(group)
    }

    fn schreier_sims(&mut self, prefix: &[usize]) {
        let degree = self.degree;
        let strong: Vec<Perm> = self
            .generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let mut base: Vec<usize> = prefix.to_vec();
        for s in &strong {
            if base.iter().all(|&b| s.apply(b) == b) {
                base.push(s.first_moved().expect("non-identity"));
            }
        }
        let mut levels: Vec<Level> = Vec::with_capacity(base.len());
        for (i, &b) in base.iter().enumerate() {
            let gens: Vec<Perm> = strong
                .iter()
                .filter(|s| base[..i].iter().all(|&c| s.apply(c) == c))
                .cloned()
                .collect();
            levels.push(Level::new(b, gens, degree));
        }
        self.levels = levels;

        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let li = i as usize;
            let orbit = self.levels[li].orbit.clone();
            let gens = self.levels[li].gens.clone();
            for &p in &orbit {
                let up = self.levels[li].transversal[&p].clone();
                for s in &gens {
                    let sp = s.apply(p);
                    let usp_inv = self.levels[li].transversal[&sp].inverse();
                    let schreier = usp_inv.compose(&s.compose(&up));
                    if schreier.is_identity() {
                        continue;
                    }
                    let (h, j) = self.strip_from(schreier, li + 1);
                    if j < self.levels.len() || !h.is_identity() {
                        if j == self.levels.len() {
                            let b = h.first_moved().expect("non-identity residue");
                            self.levels.push(Level::new(b, Vec::new(), degree));
                        }
                        for l in (li + 1)..=j {
                            self.levels[l].gens.push(h.clone());
                            self.levels[l].rebuild(degree);
                        }
                        i = j as isize;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
        // Drop trailing levels with trivial basic orbit from an unused prefix.
        while self.levels.last().is_some_and(|l| l.orbit.len() == 1 && l.gens.is_empty()) {
            self.levels.pop();
        }
    }

    /// Sifts `g` through levels `start..`; returns the residue and the level
    /// at which sifting stopped (`levels.len()` when it passed every level).
    fn strip_from(&self, g: Perm, start: usize) -> (Perm, usize) {
        let mut h = g;
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let p = h.apply(level.base);
            match level.transversal.get(&p) {
                None => return (h, i),
                Some(u) => h = u.inverse().compose(&h),
            }
        }
        (h, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, j) = self.strip_from(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    /// Every element, as products of transversal representatives.
    pub fn elements(&self) -> Vec<Perm> {
        let mut out = vec![Perm::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for p in &level.orbit {
                let u = &level.transversal[p];
                for g in &out {
                    next.push(u.compose(g));
                }
            }
            out = next;
        }
        out
    }

    /// Orbits as an ordered partition, blocks sorted and ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_under(self.degree, &self.generators)
    }

    pub fn orbit_of(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![x];
        seen[x] = true;
        let mut i = 0;
        while i < orbit.len() {
            let p = orbit[i];
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    orbit.push(q);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    /// Full stabilizer of `x`, read off a chain whose first base point is `x`.
    pub fn point_stabilizer(&self, x: usize) -> Result<PermGroup, PermError> {
        if x >= self.degree {
            return Err(PermError::PointOutOfRange {
                point: x,
                degree: self.degree,
            });
        }
        let chain = PermGroup::with_base_prefix(self.degree, self.generators.clone(), &[x])?;
        let gens: Vec<Perm> = match chain.levels.first() {
            Some(l0) if l0.base == x => chain.levels.iter().skip(1).flat_map(|l| l.gens.clone()).collect(),
            _ => chain.generators.clone(),
        };
        let gens = dedup(gens);
        PermGroup::new(self.degree, gens)
    }

    /// The subgroup generated by all point stabilizers (written `G^+`).
    pub fn point_stabilizer_closure(&self) -> PermGroup {
        let mut gens = Vec::new();
        for x in 0..self.degree {
            let stab = self.point_stabilizer(x).expect("in range");
            gens.extend(stab.generators.iter().cloned());
        }
        PermGroup::new(self.degree, dedup(gens)).expect("same degree")
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Normality of `self` in `ambient` via generator conjugates.
    pub fn is_normal_in(&self, ambient: &PermGroup) -> bool {
        self.is_subgroup_of(ambient)
            && ambient.generators.iter().all(|g| {
                let gi = g.inverse();
                self.generators.iter().all(|s| self.contains(&gi.compose(&s.compose(g))))
            })
    }

    pub fn predicates(&self) -> GroupPredicates {
        let orbits = self.orbits();
        let order = self.order();
        let transitive = orbits.len() == 1;
        let semiregular = orbits.iter().all(|o| o.len() as u128 == order);
        let primitive = transitive && self.is_primitive_transitive();
        GroupPredicates {
            transitive,
            semiregular,
            regular: transitive && semiregular,
            primitive,
        }
    }

    /// Atkinson's minimal-block test on pairs `{0, y}`.
    fn is_primitive_transitive(&self) -> bool {
        if self.degree <= 2 {
            return true;
        }
        (1..self.degree).all(|y| {
            let block = minimal_block(self.degree, &self.generators, 0, y);
            block.len() == self.degree
        })
    }
}

fn dedup(gens: Vec<Perm>) -> Vec<Perm> {
    let mut out: Vec<Perm> = Vec::new();
    for g in gens {
        if !g.is_identity() && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

pub(crate) fn orbits_under(degree: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; degree];
    let mut out = Vec::new();
    for start in 0..degree {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![start];
        label[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = g.apply(p);
                if label[q] == usize::MAX {
                    label[q] = id;
                    orbit.push(q);
                    queue.push_back(q);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// The smallest block of imprimitivity containing `a` and `b`.
fn minimal_block(degree: usize, gens: &[Perm], a: usize, b: usize) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..degree).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut queue = VecDeque::new();
    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
    if ra != rb {
        parent[rb] = ra;
        queue.push_back((a, b));
    }
    while let Some((x, y)) = queue.pop_front() {
        for g in gens {
            let (gx, gy) = (g.apply(x), g.apply(y));
            let (rx, ry) = (find(&mut parent, gx), find(&mut parent, gy));
            if rx != ry {
                parent[ry] = rx;
                queue.push_back((gx, gy));
            }
        }
    }
    let root = find(&mut parent, a);
    (0..degree).filter(|&x| find(&mut parent, x) == root).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GroupPredicates {
    pub transitive: bool,
    pub semiregular: bool,
    pub regular: bool,
    pub primitive: bool,
}

/// The permutation group induced on the orbits of a normal subgroup.
#[derive(Debug, Clone)]
pub struct OrbitQuotient {
    /// Orbits of the normal subgroup, ordered by least element.
    pub orbits: Vec<Vec<usize>>,
    /// Induced action on orbit indices `0..r`.
    pub group: PermGroup,
    /// `[F' : F'^+]`.
    pub index: u128,
    /// Whether the induced group has order equal to the index.
    pub faithful: bool,
}

impl OrbitQuotient {
    pub fn orbit_index_of(&self, point: usize) -> usize {
        self.orbits
            .iter()
            .position(|o| o.binary_search(&point).is_ok())
            .expect("orbits partition the points")
    }

    /// Image of `g` in the quotient as a permutation of orbit indices.
    pub fn induced(&self, g: &Perm) -> Perm {
        induced_on_blocks(&self.orbits, g)
    }
}

fn induced_on_blocks(blocks: &[Vec<usize>], g: &Perm) -> Perm {
    let mut block_of = vec![0; g.degree()];
    for (i, b) in blocks.iter().enumerate() {
        for &x in b {
            block_of[x] = i;
        }
    }
    let images = blocks.iter().map(|b| block_of[g.apply(b[0])]).collect();
    Perm::from_images(images).expect("blocks are permuted")
}

/// The action of `fp` on the orbits of `fp_plus`.
pub fn quotient_on_orbits(fp: &PermGroup, fp_plus: &PermGroup) -> OrbitQuotient {
    let orbits = fp_plus.orbits();
    let gens: Vec<Perm> = fp.generators().iter().map(|g| induced_on_blocks(&orbits, g)).collect();
    let group = PermGroup::new(orbits.len(), gens).expect("orbit count degree");
    let index = fp.order() / fp_plus.order();
    let faithful = group.order() == index;
    OrbitQuotient {
        orbits,
        group,
        index,
        faithful,
    }
}

/// A validated local action pair `F <= F'` on `d >= 3` points in which every
/// element of `F'` maps each `F`-orbit onto itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalActionPair {
    f: PermGroup,
    fp: PermGroup,
}

impl LocalActionPair {
    pub fn new(f: PermGroup, fp: PermGroup) -> Result<Self, PermError> {
        validate_pair(f, fp)
    }

    pub fn f(&self) -> &PermGroup {
        &self.f
    }

    pub fn fp(&self) -> &PermGroup {
        &self.fp
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }
}

pub fn validate_pair(f: PermGroup, fp: PermGroup) -> Result<LocalActionPair, PermError> {
    if f.degree() != fp.degree() {
        return Err(PermError::DegreeMismatch {
            expected: f.degree(),
            found: fp.degree(),
        });
    }
    if f.degree() < 3 {
        return Err(PermError::DegreeTooSmall(f.degree()));
    }
    for g in f.generators() {
        if !fp.contains(g) {
            return Err(PermError::NotContained {
                generator: g.to_string(),
            });
        }
    }
    let orbits = f.orbits();
    for g in fp.generators() {
        for orbit in &orbits {
            let moved = orbit.iter().any(|&x| orbit.binary_search(&g.apply(x)).is_err());
            if !moved {
                continue;
            }
            // Distinguish "permutes the orbits as blocks" from a plain violation.
            let as_block = orbits.iter().any(|o| {
                o.len() == orbit.len() && orbit.iter().all(|&x| o.binary_search(&g.apply(x)).is_ok())
            });
            let all_blocks = orbits.iter().all(|ob| {
                orbits
                    .iter()
                    .any(|o| o.len() == ob.len() && ob.iter().all(|&x| o.binary_search(&g.apply(x)).is_ok()))
            });
            return Err(PermError::OrbitNotPreserved {
                generator: g.to_string(),
                orbit: orbit.clone(),
                weak_only: as_block && all_blocks,
            });
        }
    }
    Ok(LocalActionPair { f, fp })
}
