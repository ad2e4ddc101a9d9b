//! The `d`-regular tree with its legal edge coloring, realized as the Cayley
//! graph of the free Coxeter group on `d` involutions: vertices are reduced
//! color words, and the edge between `w` and `w·a` carries color `a`.

use std::borrow::Borrow;
use std::fmt;

use thiserror::Error;

pub type Color = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("color {color} out of range for degree {degree}")]
    ColorOutOfRange { color: usize, degree: usize },
    #[error("word is not reduced: letter {letter} repeated at position {position}")]
    NotReduced { letter: Color, position: usize },
    #[error("cannot parse `{0}` as a vertex")]
    BadVertex(String),
    #[error("cannot parse `{0}` as a half-tree (expected `base:dir`)")]
    BadHalfTree(String),
    #[error("rational end needs a period of length at least 2 whose wrap-around is reduced")]
    BadPeriod,
}

/// A vertex: a reduced word over the colors. The empty word is the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vertex(Vec<Color>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    /// Builds a vertex, checking that adjacent letters differ.
    pub fn from_word(word: Vec<Color>) -> Result<Self, TreeError> {
        for (i, w) in word.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(TreeError::NotReduced {
                    letter: w[0],
                    position: i + 1,
                });
            }
        }
        Ok(Vertex(word))
    }

    /// Freely reduces an arbitrary word.
    pub fn reduce(word: &[Color]) -> Self {
        let mut out: Vec<Color> = Vec::with_capacity(word.len());
        for &a in word {
            if out.last() == Some(&a) {
                out.pop();
            } else {
                out.push(a);
            }
        }
        Vertex(out)
    }

    /// Parses a digit string (`d <= 10`) or comma-separated colors (`d > 10`).
    pub fn parse(text: &str, degree: usize) -> Result<Self, TreeError> {
        let text = text.trim();
        let letters: Vec<usize> = if text.is_empty() || text == "ε" {
            Vec::new()
        } else if degree > 10 || text.contains(',') {
            text.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| TreeError::BadVertex(text.to_string())))
                .collect::<Result<_, _>>()?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).map(|x| x as usize).ok_or_else(|| TreeError::BadVertex(text.to_string())))
                .collect::<Result<_, _>>()?
        };
        let mut word = Vec::with_capacity(letters.len());
        for a in letters {
            if a >= degree || a > Color::MAX as usize {
                return Err(TreeError::ColorOutOfRange { color: a, degree });
            }
            word.push(a as Color);
        }
        Vertex::from_word(word)
    }

    pub fn render(&self, degree: usize) -> String {
        render_word(&self.0, degree)
    }

    pub fn word(&self) -> &[Color] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Color> {
        self.0.last().copied()
    }

    pub fn parent(&self) -> Option<Vertex> {
        if self.0.is_empty() {
            None
        } else {
            Some(Vertex(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// The neighbor across the edge of color `a`.
    pub fn neighbor(&self, a: Color) -> Vertex {
        let mut w = self.0.clone();
        if w.last() == Some(&a) {
            w.pop();
        } else {
            w.push(a);
        }
        Vertex(w)
    }

    pub(crate) fn step_mut(&mut self, a: Color) {
        if self.0.last() == Some(&a) {
            self.0.pop();
        } else {
            self.0.push(a);
        }
    }

    /// Left multiplication `self · other` in the free Coxeter group.
    pub fn mul(&self, other: &Vertex) -> Vertex {
        let mut w = self.clone();
        for &a in &other.0 {
            w.step_mut(a);
        }
        w
    }

    /// The group inverse: the reversed word.
    pub fn inverse(&self) -> Vertex {
        Vertex(self.0.iter().rev().copied().collect())
    }

    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl Borrow<[Color]> for Vertex {
    fn borrow(&self) -> &[Color] {
        &self.0
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            write!(f, "\"{}\"", render_word(&self.0, 0))
        }
    }
}

pub(crate) fn render_word(word: &[Color], degree: usize) -> String {
    if degree > 10 || word.iter().any(|&a| a >= 10) {
        word.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
    } else {
        word.iter().map(|a| char::from(b'0' + a)).collect()
    }
}

/// Colors along the geodesic from `v` to `w`, i.e. the reduced word `v⁻¹·w`.
pub fn geodesic_colors(v: &Vertex, w: &Vertex) -> Vec<Color> {
    let k = v.0.iter().zip(&w.0).take_while(|(a, b)| a == b).count();
    let mut out: Vec<Color> = v.0[k..].iter().rev().copied().collect();
    out.extend_from_slice(&w.0[k..]);
    out
}

pub fn distance(v: &Vertex, w: &Vertex) -> usize {
    let k = v.0.iter().zip(&w.0).take_while(|(a, b)| a == b).count();
    v.0.len() + w.0.len() - 2 * k
}

/// Reduced words of length at most `radius`, in length-lexicographic order.
pub fn ball_at_root(degree: usize, radius: usize) -> Vec<Vertex> {
    let mut out = vec![Vertex::root()];
    let mut layer = vec![Vertex::root()];
    for _ in 0..radius {
        let mut next = Vec::with_capacity(layer.len() * degree.saturating_sub(1).max(1));
        for v in &layer {
            for a in 0..degree as Color {
                if v.last() != Some(a) {
                    let mut w = v.0.clone();
                    w.push(a);
                    next.push(Vertex(w));
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// All vertices within `radius` of `center`, sorted by (length, word).
pub fn ball(center: &Vertex, degree: usize, radius: usize) -> Vec<Vertex> {
    if center.is_root() {
        return ball_at_root(degree, radius);
    }
    let mut out: Vec<Vertex> = ball_at_root(degree, radius).iter().map(|u| center.mul(u)).collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Number of vertices in a ball of the given radius.
pub fn ball_size(degree: usize, radius: usize) -> usize {
    let mut total = 1;
    let mut layer = 1;
    for i in 0..radius {
        layer *= if i == 0 { degree } else { degree - 1 };
        total += layer;
    }
    total
}

/// The half-tree cut off by the edge from `base` along color `dir`: the
/// vertices `w` whose geodesic from `base` starts with `dir`. Its boundary is
/// the cylinder of ends through that edge.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfTree {
    pub base: Vertex,
    pub dir: Color,
}

impl HalfTree {
    pub fn new(base: Vertex, dir: Color) -> Self {
        HalfTree { base, dir }
    }

    /// The cylinder of vertices and ends whose word starts with `prefix`.
    pub fn cylinder(prefix: &Vertex) -> Self {
        let dir = prefix.last().expect("cylinders need a nonempty prefix");
        HalfTree {
            base: prefix.parent().unwrap(),
            dir,
        }
    }

    /// `head` is the first vertex inside the half-tree.
    pub fn head(&self) -> Vertex {
        self.base.neighbor(self.dir)
    }

    pub fn complement(&self) -> HalfTree {
        HalfTree {
            base: self.head(),
            dir: self.dir,
        }
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        distance(&self.head(), v) < distance(&self.base, v)
    }

    pub fn contains_end(&self, end: &RationalEnd) -> bool {
        let depth = self.base.len() + 2;
        self.contains(&end.vertex_at(depth))
    }

    /// Exact containment of half-trees.
    pub fn is_subset_of(&self, other: &HalfTree) -> bool {
        if self == other {
            return true;
        }
        // self ⊆ other iff self's edge lies inside `other` and points away from it.
        let (x1, y1) = (&self.base, self.head());
        let x2 = &other.base;
        other.contains(x1) && other.contains(&y1) && distance(x2, &y1) == distance(x2, x1) + 1
    }

    pub fn is_disjoint_from(&self, other: &HalfTree) -> bool {
        self.is_subset_of(&other.complement())
    }

    pub fn parse(text: &str, degree: usize) -> Result<Self, TreeError> {
        let (base, dir) = text.split_once(':').ok_or_else(|| TreeError::BadHalfTree(text.to_string()))?;
        let base = Vertex::parse(base, degree)?;
        let dir: usize = dir.trim().parse().map_err(|_| TreeError::BadHalfTree(text.to_string()))?;
        if dir >= degree {
            return Err(TreeError::ColorOutOfRange { color: dir, degree });
        }
        Ok(HalfTree { base, dir: dir as Color })
    }

    pub fn render(&self, degree: usize) -> String {
        format!("{}:{}", self.base.render(degree), self.dir)
    }

    /// Vertices of the half-tree lying in the root ball of radius `radius`.
    pub fn vertices_within(&self, degree: usize, radius: usize) -> Vec<Vertex> {
        let start = self.head();
        if start.len() > radius {
            return Vec::new();
        }
        let mut out = vec![start.clone()];
        let mut stack = vec![(start, self.base.clone())];
        while let Some((v, from)) = stack.pop() {
            for a in 0..degree as Color {
                let w = v.neighbor(a);
                if w == from || w.len() > radius {
                    continue;
                }
                out.push(w.clone());
                stack.push((w, v.clone()));
            }
        }
        out
    }
}

impl fmt::Debug for HalfTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}:{}", self.base, self.dir)
    }
}

/// An eventually periodic end `prefix · period · period · …`.
///
/// Stored canonically: the period is primitive and the prefix cannot be
/// shortened by rotating the period.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalEnd {
    prefix: Vec<Color>,
    period: Vec<Color>,
}

impl RationalEnd {
    pub fn new(prefix: Vec<Color>, period: Vec<Color>) -> Result<Self, TreeError> {
        if period.len() < 2 || period.first() == period.last() {
            return Err(TreeError::BadPeriod);
        }
        Vertex::from_word(prefix.clone())?;
        Vertex::from_word(period.clone())?;
        if prefix.last() == period.first() {
            return Err(TreeError::NotReduced {
                letter: period[0],
                position: prefix.len(),
            });
        }
        let mut end = RationalEnd { prefix, period };
        end.canonicalize();
        Ok(end)
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        for k in 1..n {
            if n % k == 0 && (0..n).all(|i| self.period[i] == self.period[i % k]) {
                self.period.truncate(k);
                break;
            }
        }
        while let (Some(&p), Some(&q)) = (self.prefix.last(), self.period.last()) {
            if p != q {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[Color] {
        &self.prefix
    }

    pub fn period(&self) -> &[Color] {
        &self.period
    }

    /// The vertex at distance `depth` from the root along the end.
    pub fn vertex_at(&self, depth: usize) -> Vertex {
        let mut w: Vec<Color> = self.prefix.iter().copied().take(depth).collect();
        let mut i = 0;
        while w.len() < depth {
            w.push(self.period[i % self.period.len()]);
            i += 1;
        }
        Vertex(w)
    }

    pub fn render(&self, degree: usize) -> String {
        format!("{}({})^∞", render_word(&self.prefix, degree), render_word(&self.period, degree))
    }
}

impl fmt::Debug for RationalEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Vertex {
        Vertex::parse(s, 4).unwrap()
    }

    fn h(base: &str, dir: Color) -> HalfTree {
        HalfTree::new(v(base), dir)
    }

    #[test]
    fn neighbor_examples() {
        assert_eq!(v("01").neighbor(1), v("0"));
        assert_eq!(v("01").neighbor(2), v("012"));
        assert_eq!(Vertex::root().neighbor(0), v("0"));
    }

    #[test]
    fn geodesic_examples() {
        assert_eq!(geodesic_colors(&v("0"), &v("01")), vec![1]);
        let g = geodesic_colors(&v("010"), &v("212"));
        assert_eq!(g, vec![0, 1, 0, 2, 1, 2]);
        assert_eq!(distance(&v("010"), &v("212")), 6);
        assert!(geodesic_colors(&v("12"), &v("12")).is_empty());
    }

    #[test]
    fn geodesic_matches_walk() {
        // Walking the geodesic from v must land on w.
        for a in ball_at_root(3, 3) {
            for b in ball_at_root(3, 3) {
                let mut x = a.clone();
                for c in geodesic_colors(&a, &b) {
                    x = x.neighbor(c);
                }
                assert_eq!(x, b);
            }
        }
    }

    #[test]
    fn ball_examples() {
        let b = ball_at_root(3, 1);
        assert_eq!(b, vec![Vertex::root(), v("0"), v("1"), v("2")]);
        assert_eq!(ball_at_root(3, 2).len(), 10);
        assert_eq!(ball_at_root(3, 0), vec![Vertex::root()]);
        for r in 0..6 {
            assert_eq!(ball_at_root(4, r).len(), ball_size(4, r));
            // 1 + d((d-1)^n - 1)/(d-2)
            assert_eq!(ball_size(4, r), 1 + 4 * (3usize.pow(r as u32) - 1) / 2);
        }
        let off = ball(&v("01"), 3, 2);
        assert_eq!(off.len(), 10);
        assert!(off.iter().all(|w| distance(w, &v("01")) <= 2));
    }

    #[test]
    fn halftree_membership_examples() {
        assert!(h("", 0).contains(&v("01")));
        assert!(!h("", 0).contains(&v("12")));
        assert!(h("0", 0).contains(&Vertex::root()));
        assert_eq!(h("", 0).complement(), h("0", 0));
    }

    #[test]
    fn halftree_subset_examples() {
        assert!(h("0", 1).is_subset_of(&h("", 0)));
        assert!(!h("", 0).is_subset_of(&h("", 1)));
        assert!(h("", 0).is_disjoint_from(&h("", 1)));
    }

    /// Subset decided by case analysis agrees with exhaustive membership.
    #[test]
    fn halftree_subset_matches_brute_force() {
        let d = 3;
        let mut halftrees = Vec::new();
        for base in ball_at_root(d, 3) {
            for a in 0..d as Color {
                halftrees.push(HalfTree::new(base.clone(), a));
            }
        }
        for h1 in &halftrees {
            for h2 in &halftrees {
                let r = h1.base.len() + h2.base.len() + 3;
                let probe = ball_at_root(d, r);
                let brute = probe.iter().all(|w| !h1.contains(w) || h2.contains(w));
                assert_eq!(h1.is_subset_of(h2), brute, "{h1:?} ⊆ {h2:?}");
            }
        }
    }

    #[test]
    fn exactly_one_side_contains() {
        for base in ball_at_root(3, 2) {
            for a in 0..3 {
                let ht = HalfTree::new(base.clone(), a);
                for w in ball_at_root(3, 4) {
                    assert!(ht.contains(&w) ^ ht.complement().contains(&w));
                }
            }
        }
    }

    #[test]
    fn vertices_within_matches_filter() {
        for ht in [h("", 0), h("0", 0), h("01", 2), h("1", 2)] {
            let mut got = ht.vertices_within(3, 4);
            got.sort();
            let mut want: Vec<_> = ball_at_root(3, 4).into_iter().filter(|w| ht.contains(w)).collect();
            want.sort();
            assert_eq!(got, want, "{ht:?}");
        }
    }

    #[test]
    fn rational_end_canonical_form() {
        let e1 = RationalEnd::new(vec![], vec![0, 1]).unwrap();
        let e2 = RationalEnd::new(vec![0, 1], vec![0, 1, 0, 1]).unwrap();
        let e3 = RationalEnd::new(vec![0], vec![1, 0]).unwrap();
        assert_eq!(e1, e2);
        assert_eq!(e1, e3);
        assert!(RationalEnd::new(vec![], vec![0]).is_err());
        assert!(RationalEnd::new(vec![], vec![0, 1, 0]).is_err());
        assert!(h("0", 1).contains_end(&e1));
        assert!(!h("1", 0).contains_end(&e1));
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(HalfTree::parse("10:2", 3).unwrap(), h("10", 2));
        assert_eq!(HalfTree::parse(":0", 3).unwrap(), h("", 0));
        assert_eq!(h("10", 2).render(3), "10:2");
        assert_eq!(Vertex::parse("10,11", 12).unwrap().word(), &[10, 11]);
        assert_eq!(Vertex::parse("10,11", 12).unwrap().render(12), "10,11");
        assert!(Vertex::parse("00", 3).is_err());
        assert!(Vertex::parse("05", 3).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_vertex(d: u8, max: usize) -> impl Strategy<Value = Vertex> {
            proptest::collection::vec(0..d, 0..=max).prop_map(|w| Vertex::reduce(&w))
        }

        proptest! {
            #[test]
            fn neighbor_is_involution(x in arb_vertex(4, 8), a in 0u8..4) {
                prop_assert_eq!(x.neighbor(a).neighbor(a), x);
            }

            #[test]
            fn distance_is_a_metric(a in arb_vertex(3, 6), b in arb_vertex(3, 6), c in arb_vertex(3, 6)) {
                prop_assert_eq!(distance(&a, &b), distance(&b, &a));
                prop_assert_eq!(distance(&a, &b), geodesic_colors(&a, &b).len());
                prop_assert!(distance(&a, &c) <= distance(&a, &b) + distance(&b, &c));
                prop_assert_eq!(distance(&a, &b) == 0, a == b);
            }
        }
    }
}
