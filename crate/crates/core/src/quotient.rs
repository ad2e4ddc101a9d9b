//! Projection of `T_d` onto `T_r` by collapsing colors within each orbit of
//! `F'⁺`, the induced morphism `φ`, and the classification report.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::autom::TreeAut;
use crate::perm::{quotient_on_orbits, LocalActionPair, OrbitQuotient, Perm, PermError, PermGroup};
use crate::tree::{geodesic_colors, Color, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("letter {letter} is outside 1..={r}")]
    LetterOutOfRange { letter: usize, r: usize },
    #[error("orbit word {0} is not reduced, so it is not a vertex of T_r")]
    NotReduced(OrbitWord),
}

/// The coloring of `Ω` by `F'⁺`-orbits, numbered `1..=r` by least element.
#[derive(Debug, Clone)]
pub struct OrbitColoring {
    color: Vec<usize>,
    quotient: OrbitQuotient,
}

/// A word over the orbit indices `1..=r`, not necessarily reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OrbitWord(pub Vec<usize>);

impl fmt::Display for OrbitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl OrbitWord {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1])
    }
}

pub fn orbit_coloring(pair: &LocalActionPair) -> OrbitColoring {
    let plus = pair.fp().point_stabilizer_closure();
    let quotient = quotient_on_orbits(pair.fp(), &plus);
    let mut color = vec![0; pair.degree()];
    for (i, orbit) in quotient.orbits.iter().enumerate() {
        for &x in orbit {
            color[x] = i + 1;
        }
    }
    OrbitColoring { color, quotient }
}

impl OrbitColoring {
    pub fn r(&self) -> usize {
        self.quotient.orbits.len()
    }

    /// `i_a`, the orbit index of color `a`.
    pub fn index_of(&self, a: Color) -> usize {
        self.color[a as usize]
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.quotient.orbits
    }

    pub fn quotient(&self) -> &OrbitQuotient {
        &self.quotient
    }

    fn least_color(&self, i: usize) -> Color {
        self.quotient.orbits[i - 1][0] as Color
    }

    pub fn image(&self, colors: &[Color]) -> OrbitWord {
        OrbitWord(colors.iter().map(|&a| self.index_of(a)).collect())
    }

    /// Induced permutation of `{0, .., r-1}` (orbit `i` at position `i-1`).
    pub fn induced(&self, p: &Perm) -> Perm {
        self.quotient.induced(p)
    }

    fn check(&self, x: &OrbitWord) -> Result<(), QuotientError> {
        let r = self.r();
        if let Some(&letter) = x.0.iter().find(|&&i| i == 0 || i > r) {
            return Err(QuotientError::LetterOutOfRange { letter, r });
        }
        if !x.is_reduced() {
            return Err(QuotientError::NotReduced(x.clone()));
        }
        Ok(())
    }

    /// The length-lex least vertex of `T_d` projecting to `x`.
    pub fn least_lift(&self, x: &OrbitWord) -> Result<Vertex, QuotientError> {
        self.check(x)?;
        let word = x.0.iter().map(|&i| self.least_color(i)).collect();
        Ok(Vertex::from_word(word).expect("distinct adjacent orbits give distinct colors"))
    }
}

/// Cancels adjacent equal letters until none remain.
pub fn free_reduce(w: &OrbitWord) -> OrbitWord {
    let mut out: Vec<usize> = Vec::with_capacity(w.len());
    for &i in &w.0 {
        if out.last() == Some(&i) {
            out.pop();
        } else {
            out.push(i);
        }
    }
    OrbitWord(out)
}

/// Whether `w` splits into consecutive even-length palindromes.
pub fn is_even_palindrome_concat(w: &OrbitWord) -> bool {
    let s = &w.0;
    let n = s.len();
    // pal[i][j]: s[i..j] is an even-length palindrome (j - i even).
    let mut pal = vec![vec![false; n + 1]; n + 1];
    for i in 0..=n {
        pal[i][i] = true;
    }
    for len in (2..=n).step_by(2) {
        for i in 0..=n - len {
            let j = i + len;
            pal[i][j] = s[i] == s[j - 1] && pal[i + 1][j - 1];
        }
    }
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for j in 1..=n {
        reachable[j] = (0..j).any(|k| reachable[k] && (j - k) % 2 == 0 && pal[k][j]);
    }
    reachable[n]
}

/// `p(v)`: the reduced orbit image of the word of `v`.
pub fn project_vertex(v: &Vertex, coloring: &OrbitColoring) -> OrbitWord {
    free_reduce(&coloring.image(v.word()))
}

pub fn same_fiber(v: &Vertex, w: &Vertex, coloring: &OrbitColoring) -> bool {
    free_reduce(&coloring.image(&geodesic_colors(v, w))).is_empty()
}

/// `σ_g ∈ D`, the orbit permutation induced by any local permutation of `g`.
pub fn sigma_bar(g: &TreeAut, coloring: &OrbitColoring) -> Perm {
    coloring.induced(&g.sigma(&Vertex::root()))
}

/// Checks that every local permutation of `g` on `ball(ε, radius)` induces `σ_g`.
pub fn sigma_bar_constancy_check(g: &TreeAut, coloring: &OrbitColoring, radius: usize) -> bool {
    let expected = sigma_bar(g, coloring);
    crate::tree::ball_at_root(g.degree(), radius)
        .iter()
        .all(|v| coloring.induced(&g.sigma(v)) == expected)
}

/// `φ(g)(x) = p(g x̃)` with `x̃` the least lift of `x`.
pub fn phi_apply(g: &TreeAut, x: &OrbitWord, coloring: &OrbitColoring) -> Result<OrbitWord, QuotientError> {
    let lift = coloring.least_lift(x)?;
    Ok(project_vertex(&g.apply(&lift), coloring))
}

/// Membership in `G(F, F')⁺ = ker φ`.
pub fn in_gplus(g: &TreeAut, coloring: &OrbitColoring) -> bool {
    sigma_bar(g, coloring).is_identity() && same_fiber(&Vertex::root(), g.root_image(), coloring)
}

/// Vertices of `T_r` within `radius` of the root, in length-lex order.
pub fn quotient_ball(r: usize, radius: usize) -> Vec<OrbitWord> {
    let mut out = vec![OrbitWord::default()];
    let mut frontier = 0;
    for _ in 0..radius {
        let end = out.len();
        for k in frontier..end {
            for i in 1..=r {
                if out[k].0.last() != Some(&i) {
                    let mut w = out[k].0.clone();
                    w.push(i);
                    out.push(OrbitWord(w));
                }
            }
        }
        frontier = end;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QClass {
    Trivial,
    InfiniteCyclic,
    InfiniteDihedral,
    VirtuallyFree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GammaModEnv {
    C2,
    DInfinity,
    DInfinityByC2,
    NonAmenable,
}

/// The group `D = F'/F'⁺` through its action on the `F'⁺`-orbits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DDescription {
    pub order: u128,
    /// `[F' : F'⁺]`.
    pub index: u128,
    pub faithful: bool,
    /// Images of the generators of `F'`, on orbit indices `1..=r`.
    pub generator_actions: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Prerequisites {
    pub f_semiregular: bool,
    pub f_ne_fp: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub degree: usize,
    pub r: usize,
    pub orbits: Vec<Vec<usize>>,
    pub fp_plus_order: u128,
    pub d: DDescription,
    pub q_class: QClass,
    pub gamma_mod_env: GammaModEnv,
    pub boundary_indivisible: bool,
    pub virtually_simple: bool,
    pub discrete: bool,
    pub prerequisites: Prerequisites,
}

impl ClassificationReport {
    /// Human-readable notes on anomalies and unmet hypotheses.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.prerequisites.f_semiregular {
            out.push("F is not semi-regular; the boundary classification assumes it is".to_string());
        }
        if !self.prerequisites.f_ne_fp {
            out.push("F = F'; the boundary classification assumes F is a proper subgroup".to_string());
        }
        if !self.d.faithful {
            out.push(format!(
                "D acts unfaithfully on the orbits: order {} but index {}",
                self.d.order, self.d.index
            ));
        }
        out
    }
}

pub fn classify(f: PermGroup, fp: PermGroup) -> Result<ClassificationReport, PermError> {
    let pair = LocalActionPair::new(f, fp)?;
    Ok(classify_pair(&pair))
}

pub fn classify_pair(pair: &LocalActionPair) -> ClassificationReport {
    let coloring = orbit_coloring(pair);
    let q = coloring.quotient();
    let r = coloring.r();
    let fp = pair.fp();
    let fp_preds = fp.predicates();
    let f_preds = pair.f().predicates();
    let fp_plus_order = fp.order() / q.index;
    let (q_class, gamma_mod_env) = match (r, fp_preds.transitive) {
        (1, _) => (QClass::Trivial, GammaModEnv::C2),
        (2, false) => (QClass::InfiniteCyclic, GammaModEnv::DInfinity),
        (2, true) => (QClass::InfiniteDihedral, GammaModEnv::DInfinityByC2),
        _ => (QClass::VirtuallyFree, GammaModEnv::NonAmenable),
    };
    let generator_actions = fp
        .generators()
        .iter()
        .map(|g| q.induced(g).images().iter().map(|i| i + 1).collect())
        .collect();
    ClassificationReport {
        degree: pair.degree(),
        r,
        orbits: q.orbits.clone(),
        fp_plus_order,
        d: DDescription {
            order: q.group.order(),
            index: q.index,
            faithful: q.faithful,
            generator_actions,
        },
        q_class,
        gamma_mod_env,
        boundary_indivisible: r <= 2,
        virtually_simple: f_preds.transitive && fp_plus_order == fp.order(),
        discrete: f_preds.semiregular,
        prerequisites: Prerequisites {
            f_semiregular: f_preds.semiregular,
            f_ne_fp: pair.f() != pair.fp(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autom::TreeGroup;
    use crate::tree::{ball_at_root, HalfTree};
    use std::sync::Arc;

    fn grp(d: usize, gens: &[&str]) -> PermGroup {
        PermGroup::from_cycle_strings(d, gens).unwrap()
    }

    fn pair(d: usize, f: &[&str], fp: &[&str]) -> LocalActionPair {
        LocalActionPair::new(grp(d, f), grp(d, fp)).unwrap()
    }

    fn d4_pair() -> LocalActionPair {
        pair(4, &["(0 1)(2 3)", "(0 2)(1 3)"], &["(0 1)", "(2 3)", "(0 2)(1 3)"])
    }

    fn r3_pair() -> LocalActionPair {
        pair(6, &["(0 1)(2 3)(4 5)"], &["(0 1)", "(2 3)", "(4 5)"])
    }

    fn s3_pair() -> LocalActionPair {
        pair(3, &["(0 1 2)"], &["(0 1)", "(0 1 2)"])
    }

    fn w(letters: &[usize]) -> OrbitWord {
        OrbitWord(letters.to_vec())
    }

    fn v(s: &str) -> Vertex {
        Vertex::parse(s, 6).unwrap()
    }

    #[test]
    fn coloring_examples() {
        let c = orbit_coloring(&s3_pair());
        assert_eq!(c.r(), 1);
        assert!((0..3).all(|a| c.index_of(a) == 1));
        let c = orbit_coloring(&d4_pair());
        assert_eq!(c.r(), 2);
        assert_eq!((0..4).map(|a| c.index_of(a)).collect::<Vec<_>>(), vec![1, 1, 2, 2]);
        assert_eq!(orbit_coloring(&r3_pair()).r(), 3);
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(free_reduce(&w(&[1, 1])), w(&[]));
        assert_eq!(free_reduce(&w(&[1, 2, 2, 3, 3, 1])), w(&[]));
        assert_eq!(free_reduce(&w(&[1, 2, 1, 2])), w(&[1, 2, 1, 2]));
    }

    /// Cancels one adjacent pair at a time, at every possible position.
    fn all_reductions(s: &[usize], out: &mut std::collections::HashSet<Vec<usize>>) {
        let mut terminal = true;
        for i in 0..s.len().saturating_sub(1) {
            if s[i] == s[i + 1] {
                terminal = false;
                let mut t = s.to_vec();
                t.drain(i..i + 2);
                all_reductions(&t, out);
            }
        }
        if terminal {
            out.insert(s.to_vec());
        }
    }

    #[test]
    fn free_reduce_is_confluent() {
        for word in [vec![1, 2, 2, 3, 3, 1], vec![1, 1, 2, 1, 1, 2, 3], vec![2, 2, 2, 1, 1, 2, 1]] {
            let mut normal_forms = std::collections::HashSet::new();
            all_reductions(&word, &mut normal_forms);
            assert_eq!(normal_forms.len(), 1);
            assert!(normal_forms.contains(&free_reduce(&OrbitWord(word)).0));
        }
    }

    /// Tries every factorization into even-length palindromes.
    fn palindrome_oracle(s: &[usize]) -> bool {
        s.is_empty()
            || (2..=s.len()).step_by(2).any(|k| {
                let head = &s[..k];
                head.iter().eq(head.iter().rev()) && palindrome_oracle(&s[k..])
            })
    }

    #[test]
    fn palindrome_examples() {
        assert!(is_even_palindrome_concat(&w(&[1, 2, 2, 1])));
        assert!(is_even_palindrome_concat(&w(&[1, 1, 2, 2])));
        assert!(!is_even_palindrome_concat(&w(&[1, 2, 2, 3, 3, 1])));
        assert!(!palindrome_oracle(&[1, 2, 2, 3, 3, 1]));
        assert!(free_reduce(&w(&[1, 2, 2, 3, 3, 1])).is_empty());
        assert!(is_even_palindrome_concat(&w(&[])));
        assert!(!is_even_palindrome_concat(&w(&[1, 2, 1])));
    }

    fn words(alphabet: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
        let total = alphabet.pow(len as u32);
        (0..total).map(move |mut n| {
            let mut s = vec![0; len];
            for x in s.iter_mut() {
                *x = n % alphabet + 1;
                n /= alphabet;
            }
            s
        })
    }

    #[test]
    fn palindrome_dp_matches_oracle() {
        for len in 0..=8 {
            for s in words(3, len) {
                assert_eq!(is_even_palindrome_concat(&OrbitWord(s.clone())), palindrome_oracle(&s), "{s:?}");
            }
        }
    }

    #[test]
    fn palindrome_concat_implies_reduction_but_not_conversely() {
        let mut failures = Vec::new();
        for alphabet in [2, 3] {
            for len in 0..=12 {
                for s in words(alphabet, len) {
                    let word = OrbitWord(s);
                    let pal = is_even_palindrome_concat(&word);
                    let empty = free_reduce(&word).is_empty();
                    assert!(!pal || empty, "{word}");
                    if empty && !pal {
                        failures.push(word);
                    }
                }
            }
        }
        assert!(failures.contains(&w(&[1, 2, 2, 3, 3, 1])));
        let two_letter = failures.iter().filter(|f| f.0.iter().all(|&i| i <= 2)).count();
        eprintln!("reduction-empty but not palindrome-factorable: {} words ({two_letter} over two letters)", failures.len());
    }

    #[test]
    fn same_fiber_examples() {
        let c = orbit_coloring(&d4_pair());
        assert!(same_fiber(&Vertex::root(), &v("01"), &c));
        assert!(!same_fiber(&Vertex::root(), &v("02"), &c));
        assert!(same_fiber(&v("213"), &v("213"), &c));
        for x in ball_at_root(4, 3) {
            for y in ball_at_root(4, 3) {
                assert_eq!(same_fiber(&x, &y, &c), project_vertex(&x, &c) == project_vertex(&y, &c));
            }
        }
    }

    fn group(p: &LocalActionPair) -> Arc<TreeGroup> {
        TreeGroup::new(p.clone()).unwrap()
    }

    fn single(g: &Arc<TreeGroup>, sigma: &str) -> TreeAut {
        let portrait = std::collections::BTreeMap::from([(Vertex::root(), Perm::parse(sigma, g.degree()).unwrap())]);
        g.element(Vertex::root(), 0, &portrait).unwrap()
    }

    #[test]
    fn sigma_bar_examples() {
        let s3 = group(&s3_pair());
        let c = orbit_coloring(&s3_pair());
        assert!(sigma_bar(&single(&s3, "(1 2)"), &c).is_identity());
        let d4 = group(&d4_pair());
        let c = orbit_coloring(&d4_pair());
        assert_eq!(sigma_bar(&single(&d4, "(0 2)(1 3)"), &c), Perm::parse("(0 1)", 2).unwrap());
    }

    #[test]
    fn sigma_bar_is_constant() {
        for p in [d4_pair(), r3_pair()] {
            let g = group(&p);
            let c = orbit_coloring(&p);
            for seed in 0..250 {
                assert!(sigma_bar_constancy_check(&g.random_element(2, seed), &c, 5));
            }
        }
    }

    #[test]
    fn phi_examples() {
        let g = group(&d4_pair());
        let c = orbit_coloring(&d4_pair());
        assert_eq!(phi_apply(&g.translation(v("02")), &w(&[]), &c).unwrap(), w(&[1, 2]));
        for x in quotient_ball(2, 3) {
            assert_eq!(phi_apply(&g.identity(), &x, &c).unwrap(), x);
        }
        assert_eq!(
            phi_apply(&g.identity(), &w(&[1, 1]), &c).unwrap_err(),
            QuotientError::NotReduced(w(&[1, 1]))
        );
        assert!(matches!(
            phi_apply(&g.identity(), &w(&[3]), &c),
            Err(QuotientError::LetterOutOfRange { letter: 3, r: 2 })
        ));
    }

    #[test]
    fn phi_is_independent_of_lift() {
        let g = group(&d4_pair());
        let c = orbit_coloring(&d4_pair());
        let lifts = [v("0"), v("1"), v("010"), v("123")];
        for lift in &lifts {
            assert_eq!(project_vertex(lift, &c), w(&[1]));
        }
        for seed in 0..100 {
            let x = g.random_element(2, seed);
            let images: Vec<OrbitWord> = lifts.iter().map(|l| project_vertex(&x.apply(l), &c)).collect();
            assert!(images.windows(2).all(|p| p[0] == p[1]));
            assert_eq!(images[0], phi_apply(&x, &w(&[1]), &c).unwrap());
        }
    }

    #[test]
    fn phi_is_a_homomorphism() {
        for p in [d4_pair(), r3_pair()] {
            let g = group(&p);
            let c = orbit_coloring(&p);
            let ball = quotient_ball(c.r(), 4);
            for seed in 0..40 {
                let a = g.random_element(2, seed);
                let b = g.random_element(2, seed + 500);
                let ab = a.compose(&b);
                for x in &ball {
                    let lhs = phi_apply(&ab, x, &c).unwrap();
                    let rhs = phi_apply(&a, &phi_apply(&b, x, &c).unwrap(), &c).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn projection_is_equivariant() {
        let p = d4_pair();
        let g = group(&p);
        let c = orbit_coloring(&p);
        let ball = ball_at_root(4, 2);
        for seed in 0..20 {
            let x = g.random_element(2, seed);
            for a in &ball {
                for b in &ball {
                    if same_fiber(a, b, &c) {
                        assert!(same_fiber(&x.apply(a), &x.apply(b), &c));
                    }
                }
            }
        }
    }

    #[test]
    fn gplus_examples() {
        let g = group(&d4_pair());
        let c = orbit_coloring(&d4_pair());
        assert!(in_gplus(&g.translation(v("01")), &c));
        assert!(!in_gplus(&g.translation(v("0")), &c));
        for p in [d4_pair(), r3_pair()] {
            let g = group(&p);
            let c = orbit_coloring(&p);
            for (i, h) in [HalfTree::new(Vertex::root(), 1), HalfTree::new(v("02"), 3)].iter().enumerate() {
                for seed in 0..10 {
                    let s = g.fixator_sample(h, 2, seed * 7 + i as u64);
                    assert!(in_gplus(&s.element, &c));
                }
            }
        }
    }

    #[test]
    fn gplus_is_normal_and_matches_kernel() {
        for p in [d4_pair(), r3_pair()] {
            let g = group(&p);
            let c = orbit_coloring(&p);
            let sample: Vec<TreeAut> = (0..30).map(|s| g.random_element(2, 900 + s)).collect();
            let members: Vec<&TreeAut> = sample.iter().filter(|x| in_gplus(x, &c)).collect();
            for x in &sample {
                let radius = 2 * x.radius() + x.root_image().len() + 2;
                let trivial = quotient_ball(c.r(), radius)
                    .iter()
                    .all(|y| phi_apply(x, y, &c).unwrap() == *y);
                assert_eq!(in_gplus(x, &c), trivial);
            }
            for a in &members {
                assert!(in_gplus(&a.inverse(), &c));
                for b in &members {
                    assert!(in_gplus(&a.compose(b), &c));
                }
                for y in &sample {
                    assert!(in_gplus(&a.conjugate_by(y), &c));
                }
            }
        }
    }

    #[test]
    fn classify_examples() {
        let rep = classify(grp(3, &["(0 1 2)"]), PermGroup::symmetric(3)).unwrap();
        assert_eq!((rep.r, rep.q_class, rep.gamma_mod_env), (1, QClass::Trivial, GammaModEnv::C2));
        assert!(rep.boundary_indivisible && rep.virtually_simple && rep.discrete);

        let rep = classify(grp(4, &["(0 1)(2 3)"]), grp(4, &["(0 1)", "(2 3)"])).unwrap();
        assert_eq!((rep.r, rep.q_class, rep.gamma_mod_env), (2, QClass::InfiniteCyclic, GammaModEnv::DInfinity));
        assert!(rep.boundary_indivisible && !rep.virtually_simple && rep.discrete);

        let p = d4_pair();
        let rep = classify(p.f().clone(), p.fp().clone()).unwrap();
        assert_eq!(
            (rep.r, rep.q_class, rep.gamma_mod_env),
            (2, QClass::InfiniteDihedral, GammaModEnv::DInfinityByC2)
        );
        assert!(rep.boundary_indivisible && !rep.virtually_simple && rep.discrete);
        assert_eq!((rep.d.order, rep.d.index, rep.d.faithful), (2, 2, true));

        let p = r3_pair();
        let rep = classify(p.f().clone(), p.fp().clone()).unwrap();
        assert_eq!((rep.r, rep.q_class, rep.gamma_mod_env), (3, QClass::VirtuallyFree, GammaModEnv::NonAmenable));
        assert!(!rep.boundary_indivisible && rep.discrete);
        assert!(rep.diagnostics().is_empty());

        assert!(classify(PermGroup::trivial(4), grp(4, &["(0 1)"])).is_err());
    }

    #[test]
    fn report_invariants_on_many_pairs() {
        let candidates: Vec<(usize, Vec<&str>, Vec<&str>)> = vec![
            (3, vec!["(0 1 2)"], vec!["(0 1 2)"]),
            (4, vec!["(0 1 2 3)"], vec!["(0 1 2 3)", "(0 2)"]),
            (4, vec!["(0 1)(2 3)", "(0 2)(1 3)"], vec!["(0 1 2)", "(0 1)(2 3)"]),
            (4, vec![], vec!["(0 1)"]),
            (5, vec!["(0 1 2 3 4)"], vec!["(0 1 2 3 4)", "(1 4)(2 3)"]),
            (6, vec!["(0 1)(2 3)(4 5)"], vec!["(0 1)(2 3)(4 5)", "(0 1)"]),
        ];
        for (d, f, fp) in candidates {
            let Ok(rep) = classify(grp(d, &f), grp(d, &fp)) else { continue };
            assert_eq!(rep.boundary_indivisible, rep.r <= 2);
            if rep.virtually_simple {
                assert_eq!(rep.r, 1);
            }
            assert_eq!(rep.d.faithful, rep.d.order == rep.d.index);
        }
    }
}
