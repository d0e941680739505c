//! The online marking game on a bipartite graph, its exhaustive solution on small graphs,
//! and the distribution simplification built on it.
//!
//! Left nodes are presented in order of nondecreasing complexity (ties by label). The
//! second player marks some of them; she loses if the marks exceed
//! `2^(i-k+1) (n+1) ln 2` or if, after one of her moves, a right node with `2^k` presented
//! neighbors has no marked neighbor.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::bits::{ceil_log2, gamma_len, BitString, StringTuple};
use crate::codebook::conditional::conditional_complexity;
use crate::codebook::engine::c;
use crate::error::{Error, Result};
use crate::models::{enumerate_distributions, DistHandle, DistributionFamily, RationalDistribution};
use crate::scalar::{ceil_neg_log2, pow2};
use crate::statistics::{dist_optimality_deficiency, dist_randomness_deficiency};

/// Seeds tried by [`find_light_neighbor`] before giving up.
pub const MAX_RETRIES: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeftNode {
    pub label: String,
    pub complexity: u32,
}

#[derive(Clone, Debug)]
pub struct BipartiteGame {
    pub n: u32,
    pub i: u32,
    pub k: u32,
    left: Vec<LeftNode>,
    adj: Vec<Vec<u32>>,
    right: usize,
}

impl BipartiteGame {
    /// Sorts the left side into presentation order; `adj[v]` lists the right neighbors of
    /// left node `v`.
    pub fn new(n: u32, i: u32, k: u32, left: Vec<LeftNode>, adj: Vec<Vec<u32>>, right: usize) -> Result<Self> {
        if n >= 64 || right as u64 > 1u64 << n {
            return Err(Error::Invalid(format!("{right} right nodes exceed 2^{n}")));
        }
        if k >= 63 || left.len() != adj.len() {
            return Err(Error::Invalid("malformed game".into()));
        }
        if adj.iter().flatten().any(|r| *r as usize >= right) {
            return Err(Error::Invalid("neighbor outside the right side".into()));
        }
        let mut nodes: Vec<(LeftNode, Vec<u32>)> = left.into_iter().zip(adj).collect();
        nodes.sort_by(|a, b| (a.0.complexity, &a.0.label).cmp(&(b.0.complexity, &b.0.label)));
        let (left, adj) = nodes
            .into_iter()
            .map(|(l, mut a)| {
                a.sort_unstable();
                a.dedup();
                (l, a)
            })
            .unzip();
        Ok(Self { n, i, k, left, adj, right })
    }

    /// `left_count` nodes of complexity `i`, each joined to `degree` distinct random right
    /// nodes among `2^n`.
    pub fn random(n: u32, i: u32, k: u32, left_count: usize, degree: usize, seed: u64) -> Result<Self> {
        let right = 1usize << n;
        let degree = degree.min(right);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut left = Vec::with_capacity(left_count);
        let mut adj = Vec::with_capacity(left_count);
        for v in 0..left_count {
            left.push(LeftNode { label: format!("L{v:05}"), complexity: i });
            let mut nb: Vec<u32> = Vec::with_capacity(degree);
            while nb.len() < degree {
                let r = rng.gen_range(0..right as u32);
                if !nb.contains(&r) {
                    nb.push(r);
                }
            }
            adj.push(nb);
        }
        Self::new(n, i, k, left, adj, right)
    }

    pub fn left(&self) -> &[LeftNode] {
        &self.left
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    /// Left nodes of complexity at most `i`, in presentation order.
    pub fn admitted(&self) -> Vec<usize> {
        (0..self.left.len()).filter(|v| self.left[*v].complexity <= self.i).collect()
    }

    /// `min(1, 2^-k (n+1) ln 2)`.
    pub fn mark_probability(&self) -> f64 {
        (2f64.powi(-(self.k as i32)) * (self.n as f64 + 1.0) * std::f64::consts::LN_2).min(1.0)
    }

    /// `2^(i-k+1) (n+1) ln 2`.
    pub fn mark_budget(&self) -> f64 {
        2f64.powi(self.i as i32 - self.k as i32 + 1) * (self.n as f64 + 1.0) * std::f64::consts::LN_2
    }

    /// Largest admissible number of marks.
    pub fn mark_limit(&self) -> usize {
        self.mark_budget().floor() as usize
    }

    pub fn heavy(&self) -> u64 {
        1u64 << self.k
    }

    /// Admitted left neighbors of right node `r`.
    pub fn admitted_neighbors(&self, r: u32) -> Vec<usize> {
        self.admitted().into_iter().filter(|v| self.adj[*v].binary_search(&r).is_ok()).collect()
    }

    /// Length of the adjacency listing: `EG(|L|) EG(|R|)`, then per left node
    /// `EG(deg+1)` and `ceil(log2 |R|)` bits per neighbor.
    pub fn graph_complexity(&self) -> u64 {
        let w = ceil_log2(self.right as u64) as u64;
        let mut bits = gamma_len(self.left.len() as u64 + 1) as u64 + gamma_len(self.right as u64) as u64;
        for a in &self.adj {
            bits += gamma_len(a.len() as u64 + 1) as u64 + w * a.len() as u64;
        }
        bits
    }
}

/// Which losing condition, if any, ended a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Zero-based move index after which the right node was uncovered.
    pub step: usize,
    pub right: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct MarkingRun {
    pub seed: u64,
    pub p: f64,
    pub budget: f64,
    /// Left nodes in the order they were played.
    pub order: Vec<usize>,
    /// `marked[s]` tells whether the node played at step `s` was marked.
    pub marked: Vec<bool>,
    pub over_budget: bool,
    pub first_violation: Option<Violation>,
    pub success: bool,
}

impl MarkingRun {
    pub fn marked_nodes(&self) -> Vec<usize> {
        self.order.iter().zip(&self.marked).filter(|(_, m)| **m).map(|(v, _)| *v).collect()
    }

    pub fn marked_count(&self) -> usize {
        self.marked.iter().filter(|m| **m).count()
    }

    /// One JSON object per event: `played`, `marked`, `violation`.
    pub fn transcript(&self, game: &BipartiteGame) -> Vec<String> {
        let mut out = Vec::new();
        for (step, (v, m)) in self.order.iter().zip(&self.marked).enumerate() {
            let label = &game.left[*v].label;
            out.push(json!({"event": "played", "step": step, "left": label}).to_string());
            if *m {
                out.push(json!({"event": "marked", "step": step, "left": label}).to_string());
            }
            if let Some(vi) = self.first_violation.as_ref().filter(|vi| vi.step == step) {
                out.push(json!({"event": "violation", "step": step, "right": vi.right}).to_string());
            }
        }
        out
    }
}

/// Replays the two losing conditions over `order`/`marked`.
fn judge(game: &BipartiteGame, order: &[usize], marked: &[bool]) -> (bool, Option<Violation>) {
    let heavy = game.heavy();
    let mut count = vec![0u64; game.right];
    let mut covered = vec![false; game.right];
    let mut first = None;
    for (step, (v, m)) in order.iter().zip(marked).enumerate() {
        for &r in &game.adj[*v] {
            count[r as usize] += 1;
            covered[r as usize] |= *m;
        }
        if first.is_none() {
            if let Some(r) = (0..game.right).find(|r| count[*r] >= heavy && !covered[*r]) {
                first = Some(Violation { step, right: r as u32 });
            }
        }
    }
    let over = marked.iter().filter(|m| **m).count() as f64 > game.mark_budget();
    (over, first)
}

/// The randomized strategy: each presented node is marked independently with probability
/// [`BipartiteGame::mark_probability`].
pub fn probabilistic_marking(game: &BipartiteGame, seed: u64) -> MarkingRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = game.mark_probability();
    let order = game.admitted();
    let marked: Vec<bool> = order.iter().map(|_| rng.gen::<f64>() < p).collect();
    let (over_budget, first_violation) = judge(game, &order, &marked);
    MarkingRun {
        seed,
        p,
        budget: game.mark_budget(),
        success: !over_budget && first_violation.is_none(),
        order,
        marked,
        over_budget,
        first_violation,
    }
}

/// Checks a run's recorded verdict against its transcript, and, for a successful run, that
/// every right node reaching `2^k` played neighbors is covered from then on.
pub fn audit_run(game: &BipartiteGame, run: &MarkingRun) -> bool {
    let (over, viol) = judge(game, &run.order, &run.marked);
    if over != run.over_budget || viol != run.first_violation || run.success != (!over && viol.is_none()) {
        return false;
    }
    if !run.success {
        return true;
    }
    let mut count = vec![0u64; game.right];
    let mut covered = vec![false; game.right];
    for (v, m) in run.order.iter().zip(&run.marked) {
        for &r in &game.adj[*v] {
            count[r as usize] += 1;
            covered[r as usize] |= *m;
        }
        if (0..game.right).any(|r| count[r] >= game.heavy() && !covered[r]) {
            return false;
        }
    }
    run.marked_count() <= game.mark_limit()
}

/// A deterministic second-player strategy: `(played, marked, presented) -> mark?`.
#[derive(Clone, Debug)]
pub struct Strategy {
    decisions: HashMap<(u64, u64, u32), bool>,
}

impl Strategy {
    pub fn decide(&self, played: u64, marked: u64, v: u32) -> Option<bool> {
        self.decisions.get(&(played, marked, v)).copied()
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }

    /// Plays the strategy against every sequence of presentations.
    pub fn defeats_every_adversary(&self, game: &BipartiteGame) -> bool {
        let nodes = game.admitted();
        let mut stack = vec![(0u64, 0u64)];
        while let Some((played, marked)) = stack.pop() {
            for (bit, _) in nodes.iter().enumerate() {
                if played >> bit & 1 == 1 {
                    continue;
                }
                let Some(mark) = self.decide(played, marked, bit as u32) else { return false };
                let np = played | 1 << bit;
                let nm = if mark { marked | 1 << bit } else { marked };
                if losing(game, &nodes, np, nm) {
                    return false;
                }
                stack.push((np, nm));
            }
        }
        true
    }
}

fn losing(game: &BipartiteGame, nodes: &[usize], played: u64, marked: u64) -> bool {
    if marked.count_ones() as usize > game.mark_limit() {
        return true;
    }
    let mut count = vec![0u64; game.right];
    let mut covered = vec![false; game.right];
    for (bit, v) in nodes.iter().enumerate() {
        if played >> bit & 1 == 1 {
            for &r in &game.adj[*v] {
                count[r as usize] += 1;
                covered[r as usize] |= marked >> bit & 1 == 1;
            }
        }
    }
    (0..game.right).any(|r| count[r] >= game.heavy() && !covered[r])
}

/// Solves the game by memoized minimax over `(played, marked)` positions. `Ok(None)` means
/// the first player wins; exceeding `max_states` positions is an error.
pub fn exhaustive_winning_strategy(game: &BipartiteGame, max_states: usize) -> Result<Option<Strategy>> {
    let nodes = game.admitted();
    if nodes.len() > 20 {
        return Err(Error::BudgetExceeded(max_states));
    }
    struct Search<'a> {
        game: &'a BipartiteGame,
        nodes: Vec<usize>,
        memo: HashMap<(u64, u64), bool>,
        choice: HashMap<(u64, u64, u32), bool>,
        max_states: usize,
    }
    impl Search<'_> {
        /// Whether the second player wins from a non-losing position.
        fn wins(&mut self, played: u64, marked: u64) -> Result<bool> {
            if let Some(w) = self.memo.get(&(played, marked)) {
                return Ok(*w);
            }
            if self.memo.len() >= self.max_states {
                return Err(Error::BudgetExceeded(self.max_states));
            }
            let mut all = true;
            for bit in 0..self.nodes.len() {
                if played >> bit & 1 == 1 {
                    continue;
                }
                let np = played | 1 << bit;
                let mut reply = None;
                // prefer not marking
                for mark in [false, true] {
                    let nm = if mark { marked | 1 << bit } else { marked };
                    if !losing(self.game, &self.nodes, np, nm) && self.wins(np, nm)? {
                        reply = Some(mark);
                        break;
                    }
                }
                match reply {
                    Some(m) => {
                        self.choice.insert((played, marked, bit as u32), m);
                    }
                    None => {
                        all = false;
                        break;
                    }
                }
            }
            self.memo.insert((played, marked), all);
            Ok(all)
        }
    }
    let mut s = Search { game, nodes, memo: HashMap::new(), choice: HashMap::new(), max_states };
    if !s.wins(0, 0)? {
        return Ok(None);
    }
    // keep only decisions reachable under the strategy
    let mut decisions = HashMap::new();
    let mut stack = vec![(0u64, 0u64)];
    while let Some((played, marked)) = stack.pop() {
        for bit in 0..s.nodes.len() {
            if played >> bit & 1 == 1 || decisions.contains_key(&(played, marked, bit as u32)) {
                continue;
            }
            let m = s.choice[&(played, marked, bit as u32)];
            decisions.insert((played, marked, bit as u32), m);
            stack.push((played | 1 << bit, if m { marked | 1 << bit } else { marked }));
        }
    }
    Ok(Some(Strategy { decisions }))
}

#[derive(Clone, Debug, Serialize)]
pub struct LightNeighbor {
    pub left: usize,
    pub label: String,
    /// 1-based position among the run's marked nodes.
    pub rank: usize,
    /// `ceil(log2 rank)`: bits to name the neighbor given the game.
    pub rank_bits: u32,
    pub seed: u64,
    pub attempts: u32,
}

/// A marked neighbor of `right` from the first successful run at seeds `seed, seed+1, ...`.
pub fn find_light_neighbor(game: &BipartiteGame, right: u32, seed: u64) -> Result<LightNeighbor> {
    let have = game.admitted_neighbors(right).len();
    if (have as u64) < game.heavy() {
        return Err(Error::HeavinessViolated { have, need: game.heavy() });
    }
    for attempt in 0..MAX_RETRIES {
        let s = seed.wrapping_add(attempt as u64);
        let run = probabilistic_marking(game, s);
        if !run.success {
            continue;
        }
        let marked = run.marked_nodes();
        let (rank, v) = marked
            .iter()
            .enumerate()
            .find(|(_, v)| game.adj[**v].binary_search(&right).is_ok())
            .expect("a successful run covers every heavy right node");
        return Ok(LightNeighbor {
            left: *v,
            label: game.left[*v].label.clone(),
            rank: rank + 1,
            rank_bits: ceil_log2(rank as u64 + 1),
            seed: s,
            attempts: attempt + 1,
        });
    }
    Err(Error::RetriesExhausted(MAX_RETRIES))
}

#[derive(Clone, Debug, Serialize)]
pub struct Simplified {
    /// Literal of the returned distribution.
    pub dist: String,
    pub a: u32,
    pub b: u32,
    /// Heaviness exponent used: `floor(log2 #admissible)`, capped by any requested value.
    pub k: u32,
    pub admissible: usize,
    /// Left nodes of the game: every distribution with `C(Q) <= a`.
    pub candidates: usize,
    pub neighbor: LightNeighbor,
    /// `-log2 prod P~(x_i)` rounded up; never above `b`.
    pub neg_log_likelihood: u32,
    /// `C(P~)` in the description system.
    pub complexity: u32,
    #[serde(skip)]
    pub distribution: RationalDistribution,
}

/// All `l`-tuples over `B^n` in lexicographic order; tuple `t` has index
/// `sum t_j 2^(n (l-1-j))`.
fn tuple_index(xs: &StringTuple) -> u32 {
    xs.iter().fold(0u32, |acc, x| acc << xs.n() | x.value())
}

/// The marking game with the distributions of `dfam` (`C(Q) <= a`) on the left and
/// `l`-tuples on the right, `Q ~ t` iff `Q(t) >= 2^-b`.
pub fn likelihood_game(n: u32, l: usize, dfam: &DistributionFamily, a: u32, b: u32, k: u32) -> Result<(BipartiteGame, Vec<DistHandle>)> {
    let nl = n * l as u32;
    if nl > 16 {
        return Err(Error::ObjectOutOfBounds(format!("{l}-tuples over B^{n}")));
    }
    let dists = enumerate_distributions(dfam, n, a)?;
    let threshold = pow2(-(b as i64));
    let tuples = 1u32 << nl;
    let mut left = Vec::new();
    let mut adj = Vec::new();
    let mut handles = Vec::new();
    for e in dists {
        let probs: Vec<BigRational> = BitString::all(n).map(|y| e.dist.prob(&y)).collect();
        let mask = (1u32 << n) - 1;
        let nb: Vec<u32> = (0..tuples)
            .filter(|t| {
                let mut p = BigRational::from_integer(BigInt::from(1));
                for j in 0..l as u32 {
                    let y = t >> (n * (l as u32 - 1 - j)) & mask;
                    p *= &probs[y as usize];
                    if p.is_zero() || p < threshold {
                        return false;
                    }
                }
                true
            })
            .collect();
        left.push(LeftNode { label: e.dist.label(), complexity: e.complexity });
        adj.push(nb);
        handles.push(e.dist);
    }
    let game = BipartiteGame::new(nl, a, k, left, adj, tuples as usize)?;
    // `new` reorders by (complexity, label); keep handles aligned
    let mut by_label: HashMap<String, DistHandle> = handles.into_iter().map(|h| (h.label(), h)).collect();
    let aligned = game.left.iter().map(|l| by_label.remove(&l.label).expect("labels are unique")).collect();
    Ok((game, aligned))
}

/// A distribution of `dfam` with `-log2 P~(xs) <= b`, named by its rank among the marked
/// nodes of the likelihood game. `k_cap` bounds the heaviness exponent.
pub fn simplify_distribution(
    xs: &StringTuple,
    dfam: &DistributionFamily,
    a: u32,
    b: u32,
    k_cap: Option<u32>,
    seed: u64,
) -> Result<Simplified> {
    let (probe, _) = likelihood_game(xs.n(), xs.l(), dfam, a, b, 0)?;
    let right = tuple_index(xs);
    let admissible = probe.admitted_neighbors(right).len();
    if admissible == 0 {
        return Err(Error::NoAdmissibleDistribution);
    }
    let mut k = 63 - (admissible as u64).leading_zeros();
    if let Some(cap) = k_cap {
        k = k.min(cap);
    }
    let (game, handles) = likelihood_game(xs.n(), xs.l(), dfam, a, b, k)?;
    let neighbor = find_light_neighbor(&game, right, seed)?;
    let handle = &handles[neighbor.left];
    let lik = handle.likelihood(xs);
    debug_assert!(lik.is_positive());
    let distribution = handle.materialize();
    Ok(Simplified {
        dist: handle.label(),
        a,
        b,
        k,
        admissible,
        candidates: game.left().len(),
        neg_log_likelihood: ceil_neg_log2(&lik),
        complexity: game.left[neighbor.left].complexity,
        neighbor,
        distribution,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Improvement {
    pub simplified: Simplified,
    /// `C(P | xs)`, the requested heaviness exponent.
    pub conditional: u32,
    /// `δ(xs, P~)` and `d(xs | P)` in millibits.
    pub delta_new: i64,
    pub randomness_old: i64,
}

/// Improvement of an admissible `P` for `xs`: `a = C(P)`,
/// `b = ceil(-log2 P(xs))`, `k = C(P | xs)` (lowered to what the registry supports), then
/// [`simplify_distribution`] over the registry.
pub fn improve_distribution(p: &RationalDistribution, xs: &StringTuple, seed: u64) -> Result<Improvement> {
    let lik = p.likelihood(xs);
    if !lik.is_positive() {
        return Err(Error::NoAdmissibleDistribution);
    }
    let a = c(p.clone())?;
    let b = ceil_neg_log2(&lik);
    let conditional = conditional_complexity(p.clone(), xs.clone())?.value;
    let simplified = simplify_distribution(xs, &DistributionFamily::Registry, a, b, Some(conditional), seed)?;
    let delta_new = dist_optimality_deficiency(xs, &simplified.distribution)?.value;
    let randomness_old = dist_randomness_deficiency(xs, p)?.value;
    Ok(Improvement { simplified, conditional, delta_new, randomness_old })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::parse_model;

    fn node(label: &str) -> LeftNode {
        LeftNode { label: label.into(), complexity: 0 }
    }

    #[test]
    fn marking_parameters_at_n8_i10_k5() {
        let g = BipartiteGame::new(8, 10, 5, vec![], vec![], 4).unwrap();
        assert!((g.mark_probability() - 0.19494).abs() < 1e-4);
        assert!((g.mark_budget() - 399.25).abs() < 0.01);
        let g0 = BipartiteGame::new(8, 10, 0, vec![], vec![], 4).unwrap();
        assert_eq!(g0.mark_probability(), 1.0);
    }

    #[test]
    fn light_right_side_only_checks_budget() {
        let light = BipartiteGame::new(2, 3, 3, (0..4).map(|i| node(&format!("v{i}"))).collect(), vec![vec![0], vec![1], vec![2], vec![3]], 4).unwrap();
        for seed in 0..20 {
            let run = probabilistic_marking(&light, seed);
            assert!(run.first_violation.is_none());
            assert_eq!(run.success, !run.over_budget);
            assert!(audit_run(&light, &run));
        }
    }

    #[test]
    fn runs_audit_and_replay() {
        let g = BipartiteGame::random(6, 8, 3, 256, 2, 11).unwrap();
        for seed in 0..50 {
            let run = probabilistic_marking(&g, seed);
            assert!(audit_run(&g, &run));
            let again = probabilistic_marking(&g, seed);
            assert_eq!(run.marked, again.marked);
            assert_eq!(run.transcript(&g), again.transcript(&g));
        }
    }

    #[test]
    fn never_mark_wins_when_nothing_is_heavy() {
        let g = BipartiteGame::new(1, 1, 2, vec![node("a"), node("b")], vec![vec![0], vec![0]], 2).unwrap();
        let s = exhaustive_winning_strategy(&g, 1000).unwrap().unwrap();
        assert!(s.defeats_every_adversary(&g));
        let mut stack = vec![(0u64, 0u64)];
        while let Some((p, m)) = stack.pop() {
            for v in 0..2u32 {
                if let Some(mark) = s.decide(p, m, v) {
                    assert!(!mark);
                    stack.push((p | 1 << v, m));
                }
            }
        }
    }

    #[test]
    fn small_game_has_a_strategy() {
        // |L| = 4, |R| = 2, k = 1
        let adj = vec![vec![0], vec![0, 1], vec![1], vec![0, 1]];
        let g = BipartiteGame::new(1, 2, 1, (0..4).map(|i| node(&format!("v{i}"))).collect(), adj, 2).unwrap();
        let s = exhaustive_winning_strategy(&g, 10_000).unwrap().expect("strategy");
        assert!(s.defeats_every_adversary(&g));
    }

    #[test]
    fn no_strategy_when_budget_is_below_one() {
        // i = 0, k = 3, n = 1: budget 2^-2 * 2 ln 2 < 1, and eight nodes share a neighbor
        let adj = vec![vec![0]; 8];
        let g = BipartiteGame::new(1, 0, 3, (0..8).map(|i| node(&format!("v{i}"))).collect(), adj, 2).unwrap();
        assert!(g.mark_budget() < 1.0);
        assert!(exhaustive_winning_strategy(&g, 100_000).unwrap().is_none());
    }

    #[test]
    fn search_budget_is_enforced() {
        let adj = vec![vec![0], vec![0, 1], vec![1], vec![0, 1]];
        let g = BipartiteGame::new(1, 2, 1, (0..4).map(|i| node(&format!("v{i}"))).collect(), adj, 2).unwrap();
        assert!(matches!(exhaustive_winning_strategy(&g, 3), Err(Error::BudgetExceeded(3))));
    }

    #[test]
    fn light_neighbor_rank_within_budget() {
        let g = BipartiteGame::random(6, 8, 3, 256, 2, 5).unwrap();
        let heavy: Vec<u32> = (0..64).filter(|r| g.admitted_neighbors(*r).len() as u64 >= g.heavy()).collect();
        assert!(!heavy.is_empty());
        for &r in heavy.iter().take(10) {
            let ln = find_light_neighbor(&g, r, 0).unwrap();
            assert!((ln.rank as f64) <= g.mark_budget());
            assert!(g.neighbors(ln.left).contains(&r));
        }
        let light = (0..64).find(|r| (g.admitted_neighbors(*r).len() as u64) < g.heavy());
        if let Some(r) = light {
            assert!(matches!(find_light_neighbor(&g, r, 0), Err(Error::HeavinessViolated { .. })));
        }
    }

    #[test]
    fn single_admissible_distribution_is_returned() {
        let x: BitString = "0110".parse().unwrap();
        let xs = StringTuple::single(x);
        let p = RationalDistribution::point(x);
        let list = DistributionFamily::List(vec![p.clone(), RationalDistribution::point("1111".parse().unwrap())]);
        let s = simplify_distribution(&xs, &list, 40, 0, None, 1).unwrap();
        assert_eq!(s.admissible, 1);
        assert_eq!(s.distribution, p);
        assert_eq!(s.neg_log_likelihood, 0);
    }

    #[test]
    fn clones_lose_index_bits() {
        let a = parse_model("cyl n=4 mask=1000 pat=0").unwrap();
        let xs = StringTuple::single("0101".parse().unwrap());
        let dfam = DistributionFamily::Clones(a.origin().unwrap().clone());
        // every clone gives 0101 probability at least 1/16
        let s = simplify_distribution(&xs, &dfam, 40, 4, None, 7).unwrap();
        assert_eq!(s.admissible, 16);
        assert_eq!(s.k, 4);
        assert!(s.neg_log_likelihood <= 4);
        assert!(s.neighbor.rank_bits <= 40 - 4 + 6);
    }

    #[test]
    fn no_admissible_distribution() {
        let xs = StringTuple::single("0101".parse().unwrap());
        let list = DistributionFamily::List(vec![RationalDistribution::point("1111".parse().unwrap())]);
        assert!(matches!(simplify_distribution(&xs, &list, 40, 3, None, 0), Err(Error::NoAdmissibleDistribution)));
    }
}
