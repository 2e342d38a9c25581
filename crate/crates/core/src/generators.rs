//! Constructors for named digraph families and seeded random models.
//!
//! Random generators draw from ChaCha8 streams. A run with master seed `s`
//! gives sample `i` its own stream seeded by [`child_seed`]`(s, i)`, so a
//! sample's digraph does not depend on which thread produced it.

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Vertex};
use crate::error::GeneratorError;

/// Failed permutation draws tolerated before a full restart.
pub const MAX_RESAMPLES: usize = 100;
/// Full restarts tolerated before giving up.
pub const MAX_RESTARTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    pub fn child(self, index: u64) -> RngSeed {
        child_seed(self, index)
    }
}

/// SplitMix64 finaliser of `master + (index + 1) * golden_gamma`.
pub fn child_seed(master: RngSeed, index: u64) -> RngSeed {
    let mut z = master
        .0
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    RngSeed(z ^ (z >> 31))
}

pub fn complete_symmetric(n: usize) -> Digraph {
    complete_on(n, n).expect("complete digraph is simple")
}

/// The complete symmetric digraph on vertices `0..k` plus `n - k` isolated
/// vertices.
pub fn complete_plus_isolated(k: usize, n: usize) -> Result<Digraph, GeneratorError> {
    if k > n {
        return Err(GeneratorError::SubsetTooLarge { k, n });
    }
    complete_on(k, n)
}

fn complete_on(k: usize, n: usize) -> Result<Digraph, GeneratorError> {
    let arcs = (0..k).flat_map(|u| (0..k).filter(move |&v| v != u).map(move |v| (u, v)));
    Ok(Digraph::new(n, arcs)?)
}

pub fn empty(n: usize) -> Digraph {
    Digraph::empty(n)
}

/// `t` disjoint digons `{2i, 2i+1}`.
pub fn digon_union(t: usize) -> Result<Digraph, GeneratorError> {
    digon_chain(t, &[])
}

/// `t` digons `{2i, 2i+1}` joined by `inter_arcs`, each running from a
/// lower-indexed digon to a higher-indexed one so no strong components merge.
///
/// Vertices in `inter_arcs` are numbered from 1, matching the usual drawing
/// with digons `{1,2}, {3,4}, ...`.
pub fn digon_chain(t: usize, inter_arcs: &[(Vertex, Vertex)]) -> Result<Digraph, GeneratorError> {
    if t == 0 {
        return Err(GeneratorError::InvalidParameter(
            "digon count must be at least 1".into(),
        ));
    }
    let n = 2 * t;
    let mut arcs: Vec<(Vertex, Vertex)> = (0..t)
        .flat_map(|i| [(2 * i, 2 * i + 1), (2 * i + 1, 2 * i)])
        .collect();
    for &(u, v) in inter_arcs {
        if u == 0 || v == 0 || u > n || v > n {
            return Err(GeneratorError::BadInterArc { u, v });
        }
        let (a, b) = (u - 1, v - 1);
        if a / 2 >= b / 2 {
            return Err(GeneratorError::BadInterArc { u, v });
        }
        arcs.push((a, b));
    }
    Ok(Digraph::new(n, arcs)?)
}

pub fn directed_cycle(k: usize) -> Result<Digraph, GeneratorError> {
    if k < 2 {
        return Err(GeneratorError::InvalidParameter(format!(
            "cycle length {k} < 2"
        )));
    }
    Ok(Digraph::new(k, (0..k).map(|i| (i, (i + 1) % k)))?)
}

/// Complete bipartite symmetric digraph with parts `0..t` and `t..2t`.
pub fn complete_bipartite_symmetric(t: usize) -> Result<Digraph, GeneratorError> {
    if t == 0 {
        return Err(GeneratorError::InvalidParameter(
            "part size must be at least 1".into(),
        ));
    }
    let arcs = (0..t).flat_map(|u| (t..2 * t).flat_map(move |v| [(u, v), (v, u)]));
    Ok(Digraph::new(2 * t, arcs)?)
}

/// Circulant tournament `i -> i + j (mod n)` for `j = 1..=(n-1)/2`.
pub fn rotational_tournament(n: usize) -> Result<Digraph, GeneratorError> {
    if n.is_multiple_of(2) {
        return Err(GeneratorError::EvenTournament(n));
    }
    if n < 3 {
        return Err(GeneratorError::InvalidParameter(format!(
            "tournament order {n} < 3"
        )));
    }
    let h = (n - 1) / 2;
    Ok(Digraph::new(
        n,
        (0..n).flat_map(|i| (1..=h).map(move |j| (i, (i + j) % n))),
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoreCompleteParams {
    pub n: usize,
    pub r: usize,
    pub beta: f64,
    pub extra_arcs: usize,
}

impl CoreCompleteParams {
    /// Extra-arc budget of `2n` used for the spectral-radius table.
    pub fn with_default_extra(n: usize, r: usize, beta: f64) -> Self {
        Self {
            n,
            r,
            beta,
            extra_arcs: 2 * n,
        }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.r == 0 || self.r > self.n {
            return Err(GeneratorError::InvalidParameter(format!(
                "core size {} outside 1..={}",
                self.r, self.n
            )));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(GeneratorError::InvalidParameter(format!(
                "beta {} outside (0, 1)",
                self.beta
            )));
        }
        Ok(())
    }
}

/// Index in `0..r` drawn from the truncated geometric law
/// `P(j) = (1-beta) beta^j / (1-beta^r)`.
pub fn truncated_geometric<R: Rng + ?Sized>(rng: &mut R, r: usize, beta: f64) -> usize {
    let u: f64 = rng.gen();
    let target = u * (1.0 - beta.powi(r as i32));
    let mut tail = 1.0;
    for j in 0..r {
        tail *= beta;
        if target < 1.0 - tail {
            return j;
        }
    }
    r - 1
}

/// Core-complete random digraph: core `0..r` induces a complete symmetric
/// digraph, every other vertex forms one digon with a core vertex chosen by
/// [`truncated_geometric`], then `extra_arcs` new arcs not inside the core
/// are added uniformly without replacement.
pub fn core_complete_random(
    p: &CoreCompleteParams,
    seed: RngSeed,
) -> Result<Digraph, GeneratorError> {
    p.validate()?;
    let (n, r) = (p.n, p.r);
    let mut rng = seed.rng();
    let mut present = vec![false; n * n];
    let mut arcs = Vec::with_capacity(r * (r - 1) + 2 * (n - r) + p.extra_arcs);
    let mut add = |u: usize, v: usize, arcs: &mut Vec<(usize, usize)>| {
        present[u * n + v] = true;
        arcs.push((u, v));
    };
    for u in 0..r {
        for v in (0..r).filter(|&v| v != u) {
            add(u, v, &mut arcs);
        }
    }
    for u in r..n {
        let c = truncated_geometric(&mut rng, r, p.beta);
        add(u, c, &mut arcs);
        add(c, u, &mut arcs);
    }
    let candidates: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| u != v && (u >= r || v >= r) && !present[u * n + v])
        .collect();
    if p.extra_arcs > candidates.len() {
        return Err(GeneratorError::TooManyExtraArcs {
            requested: p.extra_arcs,
            available: candidates.len(),
        });
    }
    let mut chosen: Vec<usize> = sample(&mut rng, candidates.len(), p.extra_arcs).into_vec();
    chosen.sort_unstable();
    arcs.extend(chosen.into_iter().map(|i| candidates[i]));
    let g = Digraph::new(n, arcs)?;
    debug_assert_eq!(g.strong_components().len(), 1.min(n));
    Ok(g)
}

/// Uniformly shuffled permutations superposed into a digraph with every in-
/// and out-degree equal to `k`.
///
/// Each new permutation is drawn and then repaired by random transpositions
/// until it creates no loop and no repeated arc. A permutation that cannot be
/// repaired counts as a failed draw. When `2k > n - 1` the complement of a
/// random `(n - 1 - k)`-regular digraph is returned instead.
pub fn random_k_regular(n: usize, k: usize, seed: RngSeed) -> Result<Digraph, GeneratorError> {
    if k == 0 || k >= n {
        return Err(GeneratorError::InvalidParameter(format!(
            "degree {k} outside 1..{n}"
        )));
    }
    if 2 * k > n - 1 {
        if k == n - 1 {
            return Ok(complete_symmetric(n));
        }
        let sparse = random_k_regular(n, n - 1 - k, seed)?;
        let arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v)));
        return Ok(Digraph::new(
            n,
            arcs.filter(|&(u, v)| u != v && !sparse.has_arc(u, v)),
        )?);
    }
    let mut rng = seed.rng();
    for _ in 0..MAX_RESTARTS {
        if let Some(succ) = superpose_permutations(n, k, &mut rng) {
            let arcs = succ
                .iter()
                .enumerate()
                .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)));
            return Ok(Digraph::new(n, arcs)?);
        }
    }
    Err(GeneratorError::RetryBudgetExhausted {
        n,
        k,
        restarts: MAX_RESTARTS,
    })
}

fn superpose_permutations(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
    let mut succ: Vec<Vec<usize>> = vec![Vec::with_capacity(k); n];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut failures = 0;
    let mut layer = 0;
    while layer < k {
        perm.shuffle(rng);
        if repair(&mut perm, &succ, rng) {
            for (u, &v) in perm.iter().enumerate() {
                succ[u].push(v);
            }
            layer += 1;
        } else {
            failures += 1;
            if failures >= MAX_RESAMPLES {
                return None;
            }
        }
    }
    Some(succ)
}

fn repair(perm: &mut [usize], succ: &[Vec<usize>], rng: &mut ChaCha8Rng) -> bool {
    let n = perm.len();
    let bad = |u: usize, v: usize| u == v || succ[u].contains(&v);
    for u in 0..n {
        if !bad(u, perm[u]) {
            continue;
        }
        let mut fixed = false;
        for _ in 0..4 * n {
            let w = rng.gen_range(0..n);
            if !bad(u, perm[w]) && !bad(w, perm[u]) {
                perm.swap(u, w);
                fixed = true;
                break;
            }
        }
        if !fixed {
            return false;
        }
    }
    // swaps with later vertices may have broken earlier ones
    (0..n).all(|u| !bad(u, perm[u]))
}

/// Each ordered pair `u != v` is an arc independently with probability
/// `p_arc`.
pub fn random_digraph(n: usize, p_arc: f64, seed: RngSeed) -> Result<Digraph, GeneratorError> {
    if !(0.0..=1.0).contains(&p_arc) {
        return Err(GeneratorError::InvalidParameter(format!(
            "arc probability {p_arc} outside [0, 1]"
        )));
    }
    let mut rng = seed.rng();
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p_arc) {
                arcs.push((u, v));
            }
        }
    }
    Ok(Digraph::new(n, arcs)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_family_sizes() {
        assert_eq!(complete_symmetric(3).size(), 6);
        let g = complete_plus_isolated(2, 5).unwrap();
        assert_eq!(g.size(), 2);
        assert!(g.has_arc(0, 1) && g.has_arc(1, 0));
        assert!((2..5).all(|v| g.out_degree(v) == 0 && g.in_degree(v) == 0));
        assert_eq!(empty(0).order(), 0);
        assert!(matches!(
            complete_plus_isolated(6, 5),
            Err(GeneratorError::SubsetTooLarge { k: 6, n: 5 })
        ));
        assert_eq!(directed_cycle(7).unwrap().size(), 7);
        let b = complete_bipartite_symmetric(3).unwrap();
        assert_eq!((b.order(), b.size()), (6, 18));
    }

    #[test]
    fn digon_chain_figure() {
        let g = digon_chain(3, &[(1, 3), (3, 5)]).unwrap();
        assert_eq!(g.size(), 8);
        let comps = g.strong_components();
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.len() == 2));
        assert_eq!(digon_union(2).unwrap(), digon_chain(2, &[]).unwrap());
        assert!(matches!(
            digon_chain(3, &[(3, 1)]),
            Err(GeneratorError::BadInterArc { u: 3, v: 1 })
        ));
        assert!(digon_chain(3, &[(1, 2)]).is_err());
    }

    #[test]
    fn tournaments_are_regular() {
        assert_eq!(
            rotational_tournament(3).unwrap(),
            directed_cycle(3).unwrap()
        );
        for n in (3..=15).step_by(2) {
            let g = rotational_tournament(n).unwrap();
            assert_eq!(g.size(), n * (n - 1) / 2);
            for v in 0..n {
                assert_eq!(g.out_degree(v), (n - 1) / 2);
                assert_eq!(g.in_degree(v), (n - 1) / 2);
            }
            for u in 0..n {
                for v in u + 1..n {
                    assert!(g.has_arc(u, v) ^ g.has_arc(v, u));
                }
            }
        }
        assert!(matches!(
            rotational_tournament(4),
            Err(GeneratorError::EvenTournament(4))
        ));
    }

    #[test]
    fn core_complete_shape() {
        let p = CoreCompleteParams {
            n: 100,
            r: 5,
            beta: 0.4,
            extra_arcs: 50,
        };
        let g = core_complete_random(&p, RngSeed(7)).unwrap();
        assert_eq!(g.size(), 20 + 190 + 50);
        assert_eq!(g.strong_components().len(), 1);
        assert_eq!(g, core_complete_random(&p, RngSeed(7)).unwrap());
        for u in 0..5 {
            for v in 0..5 {
                assert_eq!(g.has_arc(u, v), u != v);
            }
        }

        let full = core_complete_random(
            &CoreCompleteParams {
                n: 6,
                r: 6,
                beta: 0.5,
                extra_arcs: 0,
            },
            RngSeed(1),
        )
        .unwrap();
        assert_eq!(full, complete_symmetric(6));

        let too_many = CoreCompleteParams {
            n: 4,
            r: 2,
            beta: 0.5,
            extra_arcs: 100,
        };
        assert!(matches!(
            core_complete_random(&too_many, RngSeed(0)),
            Err(GeneratorError::TooManyExtraArcs { .. })
        ));
    }

    #[test]
    fn small_beta_concentrates_attachments() {
        let share = |beta: f64| {
            let mut rng = RngSeed(3).rng();
            let hits = (0..20_000)
                .filter(|_| truncated_geometric(&mut rng, 5, beta) == 0)
                .count();
            hits as f64 / 20_000.0
        };
        let (low, high) = (share(0.1), share(0.8));
        assert!(low > high);
        assert!((low - 0.9 / (1.0 - 1e-5)).abs() < 0.01);
    }

    #[test]
    fn k_regular_profiles() {
        assert_eq!(
            random_k_regular(4, 3, RngSeed(0)).unwrap(),
            complete_symmetric(4)
        );
        let g = random_k_regular(100, 10, RngSeed(42)).unwrap();
        let profile = g.degree_profile();
        assert!(profile.out_degrees.iter().all(|&d| d == 10));
        assert!(profile.in_degrees.iter().all(|&d| d == 10));
        assert!(random_k_regular(3, 3, RngSeed(0)).is_err());
        assert_ne!(g, random_k_regular(100, 10, RngSeed(43)).unwrap());
    }

    #[test]
    fn random_digraph_extremes() {
        assert_eq!(random_digraph(6, 0.0, RngSeed(1)).unwrap(), empty(6));
        assert_eq!(
            random_digraph(6, 1.0, RngSeed(1)).unwrap(),
            complete_symmetric(6)
        );
        assert_eq!(
            random_digraph(20, 0.3, RngSeed(9)).unwrap(),
            random_digraph(20, 0.3, RngSeed(9)).unwrap()
        );
    }

    #[test]
    fn child_seeds_differ() {
        let s = RngSeed(5);
        assert_ne!(s.child(0), s.child(1));
        assert_eq!(s.child(17), child_seed(RngSeed(5), 17));
    }
}
