//! Uniformly recurrent subgroups of finite groups.
//!
//! For a finite group the space of subgroups is discrete, so its minimal
//! invariant subsets are the conjugacy classes of subgroups. This module
//! enumerates them, orders them by `≼`, and computes envelopes and the
//! classes arising as point stabilizers of finite actions.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::perm::{Perm, PermGroup};

pub const DEFAULT_BOUND: u128 = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UrsError {
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    TooLarge { order: u128, bound: u128 },
    #[error("expected {expected} action permutations (one per generator), found {found}")]
    ActionArity { expected: usize, found: usize },
    #[error("generator images do not define an action of the group")]
    IllDefinedAction,
    #[error("the ambient group does not normalize the group")]
    NotNormalized,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
}

/// A finite permutation group with its elements and multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    group: PermGroup,
    /// Sorted; the identity comes first.
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    /// `mul[i][j]` is the index of `elements[i] ∘ elements[j]`.
    mul: Vec<Vec<u16>>,
    inv: Vec<usize>,
}

/// A subgroup as the sorted indices of its elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_indices(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && other.order() % self.order() == 0 && self.elements.iter().all(|&i| other.contains(i))
    }

    /// Orders by size, then by sorted element list.
    fn key(&self) -> (usize, &[usize]) {
        (self.elements.len(), &self.elements)
    }
}

impl FiniteGroup {
    pub fn new(group: PermGroup) -> Result<Self, UrsError> {
        Self::with_bound(group, DEFAULT_BOUND)
    }

    pub fn with_bound(group: PermGroup, bound: u128) -> Result<Self, UrsError> {
        let order = group.order();
        if order > bound || order > u16::MAX as u128 {
            return Err(UrsError::TooLarge { order, bound });
        }
        let mut elements = group.elements();
        elements.sort();
        let index: HashMap<Perm, usize> = elements.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mul = elements
            .iter()
            .map(|x| elements.iter().map(|y| index[&x.compose(y)] as u16).collect())
            .collect();
        let inv = elements.iter().map(|x| index[&x.inverse()]).collect();
        Ok(FiniteGroup {
            group,
            elements,
            index,
            mul,
            inv,
        })
    }

    pub fn perm_group(&self) -> &PermGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i][j] as usize
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inv[i]
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.order()).collect(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup { elements: vec![0] }
    }

    /// `⟨gens⟩`, giving up early with the whole group once more than half of it is reached.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let n = self.order();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut list = vec![0usize];
        let mut k = 0;
        while k < list.len() {
            let x = list[k];
            k += 1;
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    list.push(y);
                    if 2 * list.len() > n {
                        return self.whole();
                    }
                }
            }
        }
        list.sort_unstable();
        Subgroup { elements: list }
    }

    pub fn subgroup_from_perms(&self, gens: &[Perm]) -> Option<Subgroup> {
        let idx: Option<Vec<usize>> = gens.iter().map(|g| self.index_of(g)).collect();
        idx.map(|idx| self.closure(&idx))
    }

    pub fn to_perm_group(&self, h: &Subgroup) -> PermGroup {
        let gens = self.small_generating_set(h);
        PermGroup::new(self.group.degree(), gens.iter().map(|&i| self.elements[i].clone()).collect())
            .expect("same degree")
    }

    /// Greedy generating set: adds elements until the closure is all of `h`.
    pub fn small_generating_set(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.trivial();
        for &x in &h.elements {
            if current.order() == h.order() {
                break;
            }
            if !current.contains(x) {
                gens.push(x);
                current = self.closure(&gens);
            }
        }
        gens
    }

    /// `g H g⁻¹`.
    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        let gi = self.inv(g);
        let mut elements: Vec<usize> = h.elements.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect();
        elements.sort_unstable();
        Subgroup { elements }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.generator_indices().iter().all(|&g| self.conjugate(h, g) == *h)
    }

    fn generator_indices(&self) -> Vec<usize> {
        self.group
            .generators()
            .iter()
            .map(|g| self.index[g])
            .collect()
    }

    /// Every subgroup, ordered by size and then by element list.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        // One generator per cyclic subgroup.
        let mut cyclic: BTreeMap<Subgroup, usize> = BTreeMap::new();
        for x in 0..self.order() {
            cyclic.entry(self.closure(&[x])).or_insert(x);
        }
        let mut found: BTreeSet<Subgroup> = cyclic.keys().cloned().collect();
        let mut frontier: Vec<Subgroup> = found.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                if h.order() == self.order() {
                    continue;
                }
                let mut gens = self.small_generating_set(h);
                for &x in cyclic.values() {
                    if h.contains(x) {
                        continue;
                    }
                    gens.push(x);
                    let joined = self.closure(&gens);
                    gens.pop();
                    if found.insert(joined.clone()) {
                        next.push(joined);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Subgroup> = found.into_iter().collect();
        out.sort_by(|a, b| a.key().cmp(&b.key()));
        out
    }

    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        self.all_subgroups().into_iter().filter(|h| self.is_normal(h)).collect()
    }

    /// Conjugacy classes of subgroups under the group itself.
    pub fn urs_classes(&self) -> Vec<UrsFin> {
        let conjugators: Vec<Perm> = self.group.generators().to_vec();
        self.classes_by(&conjugators)
    }

    /// Conjugacy classes of subgroups under an ambient group normalizing this one.
    pub fn urs_classes_under(&self, ambient: &PermGroup) -> Result<Vec<UrsFin>, UrsError> {
        if ambient.degree() != self.group.degree() {
            return Err(UrsError::DegreeMismatch {
                expected: self.group.degree(),
                found: ambient.degree(),
            });
        }
        for a in ambient.generators() {
            let ai = a.inverse();
            if self.group.generators().iter().any(|g| !self.group.contains(&a.compose(g).compose(&ai))) {
                return Err(UrsError::NotNormalized);
            }
        }
        Ok(self.classes_by(ambient.generators()))
    }

    fn conjugate_by_perm(&self, h: &Subgroup, a: &Perm) -> Subgroup {
        let ai = a.inverse();
        let mut elements: Vec<usize> = h
            .elements
            .iter()
            .map(|&x| self.index[&a.compose(&self.elements[x]).compose(&ai)])
            .collect();
        elements.sort_unstable();
        Subgroup { elements }
    }

    fn classes_by(&self, conjugators: &[Perm]) -> Vec<UrsFin> {
        let subgroups = self.all_subgroups();
        let mut assigned: BTreeSet<Subgroup> = BTreeSet::new();
        let mut classes = Vec::new();
        for h in &subgroups {
            if assigned.contains(h) {
                continue;
            }
            let mut members = vec![h.clone()];
            assigned.insert(h.clone());
            let mut k = 0;
            while k < members.len() {
                for a in conjugators {
                    let c = self.conjugate_by_perm(&members[k], a);
                    if assigned.insert(c.clone()) {
                        members.push(c);
                    }
                }
                k += 1;
            }
            members.sort_by(|a, b| a.key().cmp(&b.key()));
            classes.push(UrsFin { members });
        }
        classes
    }

    /// `H ≼ K`: some member of `c1` lies in some member of `c2`.
    pub fn urs_leq(&self, c1: &UrsFin, c2: &UrsFin) -> bool {
        let exists = c1.members.iter().any(|h| c2.members.iter().any(|k| h.is_subgroup_of(k)));
        let (every_h, every_k) = urs_leq_forms(c1, c2);
        assert_eq!(exists, every_h && every_k, "the two formulations of ≼ disagree");
        exists
    }

    /// The subgroup generated by all members; normal in the group.
    pub fn envelope(&self, c: &UrsFin) -> Subgroup {
        let gens: Vec<usize> = c.members.iter().flat_map(|h| self.small_generating_set(h)).collect();
        let env = self.closure(&gens);
        assert!(self.is_normal(&env), "envelope must be normal");
        env
    }

    /// Classes of point stabilizers for the action given by one permutation
    /// of `X` per generator of the group.
    pub fn stabilizer_classes(&self, action: &[Perm]) -> Result<Vec<UrsFin>, UrsError> {
        let gens = self.group.generators();
        if action.len() != gens.len() {
            return Err(UrsError::ActionArity {
                expected: gens.len(),
                found: action.len(),
            });
        }
        let d = self.group.degree();
        let n = match action.first() {
            Some(p) => p.degree(),
            None => 0,
        };
        if action.iter().any(|p| p.degree() != n) {
            return Err(UrsError::IllDefinedAction);
        }
        // The graph of the would-be homomorphism, as a group on d + n points.
        let combined: Vec<Perm> = gens
            .iter()
            .zip(action)
            .map(|(g, x)| {
                let mut images = g.images().to_vec();
                images.extend(x.images().iter().map(|&y| y + d));
                Perm::from_images(images).expect("disjoint union of permutations")
            })
            .collect();
        let graph = PermGroup::new(d + n, combined).expect("consistent degree");
        if graph.order() != self.order() as u128 {
            return Err(UrsError::IllDefinedAction);
        }
        let mut stabs: BTreeSet<Subgroup> = BTreeSet::new();
        let graph_elements = graph.elements();
        for x in 0..n {
            let mut elements: Vec<usize> = graph_elements
                .iter()
                .filter(|e| e.apply(d + x) == d + x)
                .map(|e| self.index[&e.restrict(d)])
                .collect();
            elements.sort_unstable();
            stabs.insert(Subgroup { elements });
        }
        let classes: Vec<UrsFin> = self
            .urs_classes()
            .into_iter()
            .filter(|c| c.members.iter().any(|m| stabs.contains(m)))
            .collect();
        Ok(classes)
    }

    /// The poset of classes under `≼` as its Hasse diagram.
    pub fn hasse(&self, classes: &[UrsFin]) -> HasseDiagram {
        let n = classes.len();
        let leq: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| self.urs_leq(&classes[i], &classes[j])).collect())
            .collect();
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && !(0..n).any(|k| k != i && k != j && leq[i][k] && leq[k][j]) {
                    covers.push([i, j]);
                }
            }
        }
        let nodes = classes
            .iter()
            .enumerate()
            .map(|(id, c)| {
                let rep = self.to_perm_group(c.representative());
                HasseNode {
                    id,
                    size: c.members.len(),
                    subgroup_order: c.representative().order(),
                    representative: rep.generators().iter().map(|g| g.to_string()).collect(),
                    normal: c.members.len() == 1,
                }
            })
            .collect();
        HasseDiagram { nodes, covers }
    }
}

/// `(every H ∈ c1 lies in some K ∈ c2, every K ∈ c2 contains some H ∈ c1)`.
pub fn urs_leq_forms(c1: &UrsFin, c2: &UrsFin) -> (bool, bool) {
    let every_h = c1.members.iter().all(|h| c2.members.iter().any(|k| h.is_subgroup_of(k)));
    let every_k = c2.members.iter().all(|k| c1.members.iter().any(|h| h.is_subgroup_of(k)));
    (every_h, every_k)
}

/// A conjugacy class of subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrsFin {
    members: Vec<Subgroup>,
}

impl UrsFin {
    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    pub fn representative(&self) -> &Subgroup {
        &self.members[0]
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Finds, for each member, an element of `group` conjugating the
    /// representative onto it.
    pub fn conjugators(&self, group: &FiniteGroup) -> Option<Vec<usize>> {
        self.members
            .iter()
            .map(|m| (0..group.order()).find(|&g| group.conjugate(self.representative(), g) == *m))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HasseNode {
    pub id: usize,
    pub size: usize,
    pub subgroup_order: usize,
    pub representative: Vec<String>,
    pub normal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HasseDiagram {
    pub nodes: Vec<HasseNode>,
    /// `[i, j]`: class `j` covers class `i`.
    pub covers: Vec<[usize; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fg(d: usize, gens: &[&str]) -> FiniteGroup {
        FiniteGroup::new(PermGroup::from_cycle_strings(d, gens).unwrap()).unwrap()
    }

    fn sym(d: usize) -> FiniteGroup {
        FiniteGroup::new(PermGroup::symmetric(d)).unwrap()
    }

    /// Every subset closed under multiplication, by exhaustion over subsets.
    fn brute_subgroups(g: &FiniteGroup) -> BTreeSet<Subgroup> {
        let n = g.order();
        assert!(n <= 16);
        let mut out = BTreeSet::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let elems: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if elems.iter().all(|&x| elems.iter().all(|&y| mask >> g.mul(x, y) & 1 == 1)) {
                out.insert(Subgroup { elements: elems });
            }
        }
        out
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(sym(3).all_subgroups().len(), 6);
        assert_eq!(fg(2, &["(0 1)"]).all_subgroups().len(), 2);
        assert_eq!(fg(4, &["(0 1)(2 3)", "(0 2)(1 3)"]).all_subgroups().len(), 5);
        assert_eq!(sym(4).all_subgroups().len(), 30);
        assert_eq!(fg(5, &["(0 1 2 3 4)", "(1 4)(2 3)"]).all_subgroups().len(), 8);
    }

    #[test]
    fn subgroups_match_exhaustion() {
        for g in [sym(3), fg(4, &["(0 1 2 3)", "(0 2)"]), fg(4, &["(0 1)(2 3)", "(0 2)(1 3)"]), fg(6, &["(0 1 2 3 4 5)"])] {
            let ours: BTreeSet<Subgroup> = g.all_subgroups().into_iter().collect();
            assert_eq!(ours, brute_subgroups(&g));
        }
    }

    #[test]
    fn subgroup_order_is_deterministic() {
        let subs = sym(4).all_subgroups();
        assert!(subs.windows(2).all(|w| w[0].key() < w[1].key()));
        assert_eq!(subs.first().unwrap().order(), 1);
        assert_eq!(subs.last().unwrap().order(), 24);
        assert_eq!(subs, sym(4).all_subgroups());
    }

    #[test]
    fn class_examples() {
        let sizes: Vec<usize> = sym(3).urs_classes().iter().map(|c| c.size()).collect();
        assert_eq!(sizes, vec![1, 3, 1, 1]);
        let c6 = fg(6, &["(0 1 2 3 4 5)"]);
        assert!(c6.urs_classes().iter().all(|c| c.size() == 1));
        let k4 = fg(4, &["(0 1)(2 3)", "(0 2)(1 3)"]);
        assert!(k4.urs_classes().iter().all(|c| c.size() == 1));
        let under: Vec<usize> = k4
            .urs_classes_under(&PermGroup::symmetric(4))
            .unwrap()
            .iter()
            .map(|c| c.size())
            .collect();
        assert_eq!(under, vec![1, 3, 1]);
        let c2 = fg(4, &["(0 1)"]);
        assert_eq!(c2.urs_classes_under(&PermGroup::symmetric(4)), Err(UrsError::NotNormalized));
        let s4 = sym(4);
        let s4_sizes: Vec<usize> = s4.urs_classes().iter().map(|c| c.size()).collect();
        assert_eq!(s4_sizes.len(), 11);
        assert_eq!(s4_sizes.iter().sum::<usize>(), 30);
        for c in s4.urs_classes() {
            assert!(c.conjugators(&s4).is_some());
        }
    }

    #[test]
    fn leq_examples() {
        let g = sym(3);
        let classes = g.urs_classes();
        let transposition = &classes[1];
        let whole = &classes[3];
        assert!(g.urs_leq(transposition, whole));
        assert!(!g.urs_leq(whole, transposition));
    }

    #[test]
    fn leq_is_a_partial_order() {
        for g in [sym(3), sym(4), fg(4, &["(0 1 2 3)", "(0 2)"]), fg(5, &["(0 1 2 3 4)", "(1 2 4 3)"])] {
            let classes = g.urs_classes();
            let n = classes.len();
            let leq: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| g.urs_leq(&classes[i], &classes[j])).collect()).collect();
            for i in 0..n {
                assert!(leq[i][i]);
                for j in 0..n {
                    if i != j {
                        assert!(!(leq[i][j] && leq[j][i]));
                    }
                    for k in 0..n {
                        if leq[i][j] && leq[j][k] {
                            assert!(leq[i][k]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn envelope_examples() {
        let g = sym(3);
        let classes = g.urs_classes();
        assert_eq!(g.envelope(&classes[1]), g.whole());
        assert_eq!(g.envelope(&classes[0]), g.trivial());
        assert_eq!(g.envelope(&classes[2]), *classes[2].representative());
    }

    #[test]
    fn envelope_is_least_normal_over_a_member() {
        for g in [sym(3), sym(4), fg(4, &["(0 1 2 3)", "(0 2)"])] {
            let normals = g.normal_subgroups();
            for c in g.urs_classes() {
                let env = g.envelope(&c);
                let over: Vec<&Subgroup> = normals.iter().filter(|n| c.representative().is_subgroup_of(n)).collect();
                assert!(over.iter().all(|n| env.is_subgroup_of(n)));
                assert!(over.contains(&&env));
            }
        }
    }

    #[test]
    fn stabilizer_examples() {
        let g = sym(3);
        let natural: Vec<Perm> = g.perm_group().generators().to_vec();
        let classes = g.stabilizer_classes(&natural).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].representative().order(), 2);

        let regular: Vec<Perm> = g
            .perm_group()
            .generators()
            .iter()
            .map(|s| {
                let i = g.index_of(s).unwrap();
                Perm::from_images((0..g.order()).map(|x| g.mul(i, x)).collect()).unwrap()
            })
            .collect();
        let classes = g.stabilizer_classes(&regular).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].representative().order(), 1);

        // Natural action on 3 points plus the sign action on 2 more.
        let mixed: Vec<Perm> = g
            .perm_group()
            .generators()
            .iter()
            .map(|s| {
                let sign = s.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2;
                let mut images = s.images().to_vec();
                images.extend(if sign == 1 { [4, 3] } else { [3, 4] });
                Perm::from_images(images).unwrap()
            })
            .collect();
        let orders: Vec<usize> = g
            .stabilizer_classes(&mixed)
            .unwrap()
            .iter()
            .map(|c| c.representative().order())
            .collect();
        assert_eq!(orders, vec![2, 3]);

        let bogus: Vec<Perm> = natural.iter().map(|_| Perm::parse("(0 1)", 2).unwrap()).collect();
        assert_eq!(g.stabilizer_classes(&bogus), Err(UrsError::IllDefinedAction));
        assert!(matches!(g.stabilizer_classes(&natural[..1]), Err(UrsError::ActionArity { .. })));
    }

    #[test]
    fn bound_is_enforced() {
        assert_eq!(
            FiniteGroup::new(PermGroup::symmetric(7)).unwrap_err(),
            UrsError::TooLarge { order: 5040, bound: DEFAULT_BOUND }
        );
    }

    #[test]
    fn hasse_of_sym3() {
        let g = sym(3);
        let h = g.hasse(&g.urs_classes());
        assert_eq!(h.nodes.len(), 4);
        let mut covers = h.covers.clone();
        covers.sort();
        assert_eq!(covers, vec![[0, 1], [0, 2], [1, 3], [2, 3]]);
    }
}
