//! Revelation mechanisms for agents with piecewise uniform preferences.
//!
//! Each agent values a set `P_i` evenly, so its utility for `X` is
//! `|X ∩ P_i| / |P_i|`. Agents report strategies `S_i`; the mechanisms here
//! turn reports into allocations.

mod flow;

use std::cmp::Ordering;

use crate::allocation::Allocation;
use crate::error::{CakeError, Result};
use crate::interval::{breakpoints, union_all, Interval, IntervalSet};
use crate::rational::{int, zero, Rational};
use crate::valuation::Valuation;

use flow::FlowNetwork;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformPreference {
    valued: IntervalSet,
}

impl UniformPreference {
    pub fn new(valued: IntervalSet) -> Result<Self> {
        if valued.length() == zero() {
            return Err(CakeError::ZeroMass);
        }
        Ok(UniformPreference { valued })
    }

    pub fn valued(&self) -> &IntervalSet {
        &self.valued
    }

    pub fn utility(&self, portion: &IntervalSet) -> Rational {
        portion.intersect(&self.valued).length() / self.valued.length()
    }

    pub fn to_valuation(&self) -> Valuation {
        Valuation::uniform_on(&self.valued).expect("positive length")
    }
}

/// Reported strategies, one per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    strategies: Vec<IntervalSet>,
}

impl Profile {
    pub fn new(strategies: Vec<IntervalSet>) -> Self {
        Profile { strategies }
    }

    /// Every agent reports its true preference.
    pub fn sincere(prefs: &[UniformPreference]) -> Self {
        Profile { strategies: prefs.iter().map(|p| p.valued.clone()).collect() }
    }

    pub fn strategies(&self) -> &[IntervalSet] {
        &self.strategies
    }

    pub fn strategy(&self, agent: usize) -> &IntervalSet {
        &self.strategies[agent]
    }

    pub fn n(&self) -> usize {
        self.strategies.len()
    }

    pub fn with_strategy(&self, agent: usize, strategy: IntervalSet) -> Profile {
        let mut strategies = self.strategies.clone();
        strategies[agent] = strategy;
        Profile { strategies }
    }

    /// `S_i ⊆ P_i` for every agent.
    pub fn is_well_behaved(&self, prefs: &[UniformPreference]) -> bool {
        self.strategies.len() == prefs.len()
            && self.strategies.iter().zip(prefs).all(|(s, p)| p.valued.contains_set(s))
    }

    pub fn into_strategies(self) -> Vec<IntervalSet> {
        self.strategies
    }
}

/// A priority order over agents, highest priority first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgentOrder {
    order: Vec<usize>,
}

impl AgentOrder {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            if i >= order.len() || seen[i] {
                return Err(CakeError::InvalidOrder(order));
            }
            seen[i] = true;
        }
        Ok(AgentOrder { order })
    }

    pub fn identity(n: usize) -> Self {
        AgentOrder { order: (0..n).collect() }
    }

    /// Shortest strategy first, ties by index.
    pub fn by_length(profile: &Profile) -> Self {
        let lengths: Vec<Rational> = profile.strategies.iter().map(IntervalSet::length).collect();
        let mut order: Vec<usize> = (0..profile.n()).collect();
        order.sort_by(|&a, &b| lengths[a].cmp(&lengths[b]).then(a.cmp(&b)));
        AgentOrder { order }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }
}

/// Each agent gets its strategy minus whatever earlier agents claimed.
pub fn lex_order(profile: &Profile, order: &AgentOrder) -> Result<Allocation> {
    if order.order.len() != profile.n() {
        return Err(CakeError::DimensionMismatch { expected: profile.n(), found: order.order.len() });
    }
    let mut claimed = IntervalSet::empty();
    let mut portions = vec![IntervalSet::empty(); profile.n()];
    for &i in &order.order {
        portions[i] = profile.strategies[i].difference(&claimed);
        claimed = claimed.union(&profile.strategies[i]);
    }
    Allocation::new(portions)
}

pub fn length_game(profile: &Profile) -> Allocation {
    lex_order(profile, &AgentOrder::by_length(profile)).expect("order matches profile")
}

/// Union of `P_i ∩ x` over the given agents.
pub fn valued_region(prefs: &[UniformPreference], agents: &[usize], x: &IntervalSet) -> Result<IntervalSet> {
    if agents.is_empty() {
        return Err(CakeError::EmptySubset);
    }
    let sets: Vec<IntervalSet> = agents.iter().map(|&i| prefs[i].valued.intersect(x)).collect();
    Ok(union_all(&sets))
}

pub fn avg(prefs: &[UniformPreference], agents: &[usize], x: &IntervalSet) -> Result<Rational> {
    Ok(valued_region(prefs, agents, x)?.length() / int(agents.len() as i64))
}

/// Pieces of `x` on which membership in every `P_i` is constant.
fn atoms(prefs: &[UniformPreference], agents: &[usize], x: &IntervalSet) -> Vec<Interval> {
    let marks = breakpoints(agents.iter().map(|&i| &prefs[i].valued));
    x.split_at(&marks)
}

fn covers(set: &IntervalSet, atom: &Interval) -> bool {
    let mid = atom.midpoint();
    set.intervals().iter().any(|i| *i.lo() <= mid && mid <= *i.hi())
}

/// The subset of `agents` whose valued region in `x` has the smallest length
/// per agent. Ties go to the smaller subset, then the lexicographically
/// smallest list of indices. Exhaustive over all nonempty subsets.
pub fn min_avg_subset(prefs: &[UniformPreference], agents: &[usize], x: &IntervalSet) -> Result<Vec<usize>> {
    if agents.is_empty() {
        return Err(CakeError::EmptySubset);
    }
    let mut agents = agents.to_vec();
    agents.sort();
    let k = agents.len();
    assert!(k < 32, "exhaustive subset search supports fewer than 32 agents");
    let pieces = atoms(prefs, &agents, x);
    let masks: Vec<(u32, Rational)> = pieces
        .iter()
        .map(|atom| {
            let mask = agents
                .iter()
                .enumerate()
                .filter(|(_, &i)| covers(&prefs[i].valued, atom))
                .fold(0u32, |m, (bit, _)| m | (1 << bit));
            (mask, atom.length())
        })
        .filter(|(mask, _)| *mask != 0)
        .collect();

    let mut best: Option<(Rational, Vec<usize>)> = None;
    for subset in 1u32..(1u32 << k) {
        let covered = masks.iter().filter(|(m, _)| m & subset != 0).fold(zero(), |acc, (_, len)| acc + len);
        let value = covered / int(subset.count_ones() as i64);
        let members: Vec<usize> = (0..k).filter(|b| subset & (1 << b) != 0).map(|b| agents[b]).collect();
        let better = match &best {
            None => true,
            Some((bv, bm)) => subset_order(&value, &members, bv, bm) == Ordering::Less,
        };
        if better {
            best = Some((value, members));
        }
    }
    Ok(best.expect("at least one subset").1)
}

fn subset_order(av: &Rational, a: &[usize], bv: &Rational, b: &[usize]) -> Ordering {
    av.cmp(bv).then(a.len().cmp(&b.len())).then_with(|| a.cmp(b))
}

/// Gives each agent in `agents` a portion of `P_i ∩ x` of length exactly
/// `avg(agents, x)`, covering the whole valued region. Feasible whenever
/// `agents` minimises `avg` over `x`.
///
/// Solved as a max-flow from pieces of the region to agents; within each
/// piece the flows are laid out left to right in agent order.
pub fn exact_allocation(prefs: &[UniformPreference], agents: &[usize], x: &IntervalSet) -> Result<Allocation> {
    let quota = avg(prefs, agents, x)?;
    let region = valued_region(prefs, agents, x)?;
    let pieces = atoms(prefs, agents, &region);
    let (source, sink) = (0, 1 + pieces.len() + agents.len());
    let mut net = FlowNetwork::new(sink + 1);
    let mut links: Vec<Vec<(usize, usize)>> = vec![Vec::new(); pieces.len()];
    for (a, atom) in pieces.iter().enumerate() {
        net.add_edge(source, 1 + a, atom.length());
        for (slot, &i) in agents.iter().enumerate() {
            if covers(&prefs[i].valued, atom) {
                let e = net.add_edge(1 + a, 1 + pieces.len() + slot, atom.length());
                links[a].push((i, e));
            }
        }
    }
    for slot in 0..agents.len() {
        net.add_edge(1 + pieces.len() + slot, sink, quota.clone());
    }
    let total = net.max_flow(source, sink);
    if total != region.length() || total != &quota * int(agents.len() as i64) {
        return Err(CakeError::Infeasible(format!(
            "cannot give every agent {quota} of the region; max flow {total} of {}",
            region.length()
        )));
    }
    let mut portions = vec![IntervalSet::empty(); prefs.len()];
    for (a, atom) in pieces.iter().enumerate() {
        let mut lo = atom.lo().clone();
        let mut ordered = links[a].clone();
        ordered.sort();
        for (i, e) in ordered {
            let amount = net.flow_on(e).clone();
            if amount > zero() {
                let hi = &lo + &amount;
                portions[i] = portions[i].union(&IntervalSet::span(lo.clone(), hi.clone()));
                lo = hi;
            }
        }
    }
    Allocation::new(portions)
}

/// One round of the min-average mechanism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcacciaRound {
    pub agents: Vec<usize>,
    pub avg: Rational,
    pub region: IntervalSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProcacciaOutcome {
    pub allocation: Allocation,
    pub rounds: Vec<ProcacciaRound>,
}

/// Truthful envy-free mechanism: repeatedly serve the subset of agents with
/// the least valued cake per head, then remove them and their region.
pub fn procaccia(prefs: &[UniformPreference]) -> Result<ProcacciaOutcome> {
    let n = prefs.len();
    if n == 0 {
        return Err(CakeError::EmptySubset);
    }
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut cake = IntervalSet::full();
    let mut portions = vec![IntervalSet::empty(); n];
    let mut rounds = Vec::new();
    while !remaining.is_empty() {
        let chosen = min_avg_subset(prefs, &remaining, &cake)?;
        let region = valued_region(prefs, &chosen, &cake)?;
        let part = exact_allocation(prefs, &chosen, &cake)?;
        for &i in &chosen {
            portions[i] = part.portion(i).clone();
        }
        rounds.push(ProcacciaRound { avg: avg(prefs, &chosen, &cake)?, agents: chosen.clone(), region: region.clone() });
        cake = cake.difference(&region);
        remaining.retain(|i| !chosen.contains(i));
    }
    Ok(ProcacciaOutcome { allocation: Allocation::new(portions)?, rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocation::equity_table;
    use crate::rational::{one, parse_rational, rat};

    fn set(pairs: &[(&str, &str)]) -> IntervalSet {
        IntervalSet::from_pairs(pairs.iter().map(|(a, b)| (parse_rational(a).unwrap(), parse_rational(b).unwrap())))
            .unwrap()
    }

    fn pref(pairs: &[(&str, &str)]) -> UniformPreference {
        UniformPreference::new(set(pairs)).unwrap()
    }

    #[test]
    fn lex_order_examples() {
        let p = Profile::new(vec![set(&[("0", "1")]), set(&[("0", "1")])]);
        let a = lex_order(&p, &AgentOrder::identity(2)).unwrap();
        assert_eq!(a.portion(0), &IntervalSet::full());
        assert!(a.portion(1).is_empty());

        let p = Profile::new(vec![set(&[("0", "0.5")]), set(&[("0", "0.6")])]);
        let a = lex_order(&p, &AgentOrder::new(vec![1, 0]).unwrap()).unwrap();
        assert!(a.portion(0).is_empty());
        assert_eq!(a.portion(1), &set(&[("0", "0.6")]));

        assert!(matches!(AgentOrder::new(vec![0, 0]), Err(CakeError::InvalidOrder(_))));
        assert!(matches!(AgentOrder::new(vec![0, 2]), Err(CakeError::InvalidOrder(_))));
    }

    #[test]
    fn length_game_keeps_a_disjoint_profile() {
        let p = Profile::new(vec![set(&[("0", "0.1")]), set(&[("0.1", "0.5")]), set(&[("0.5", "1")])]);
        let a = length_game(&p);
        assert_eq!(a.portions(), p.strategies());
    }

    #[test]
    fn length_game_shorter_claim_wins() {
        let p = Profile::new(vec![set(&[("0", "0.4")]), set(&[("0.1", "0.5")]), set(&[("0.5", "1")])]);
        let a = length_game(&p);
        // equal lengths: agent 0 goes first
        assert_eq!(a.portion(0), &set(&[("0", "0.4")]));
        assert_eq!(a.portion(1), &set(&[("0.4", "0.5")]));
        let p = Profile::new(vec![set(&[("0", "0.3")]), set(&[]), set(&[("0.2", "1")])]);
        let a = length_game(&p);
        assert_eq!(a.portion(2), &set(&[("0.3", "1")]));
    }

    #[test]
    fn averages() {
        let prefs = vec![pref(&[("0", "0.5")]), pref(&[("0", "0.6")]), pref(&[("0.5", "1")])];
        assert_eq!(avg(&prefs, &[0], &IntervalSet::full()).unwrap(), rat(1, 2));
        assert_eq!(avg(&prefs, &[0, 1, 2], &IntervalSet::full()).unwrap(), rat(1, 3));
        assert_eq!(valued_region(&prefs, &[0, 2], &set(&[("0.4", "0.7")])).unwrap(), set(&[("0.4", "0.7")]));
        assert!(matches!(avg(&prefs, &[], &IntervalSet::full()), Err(CakeError::EmptySubset)));
        let same = vec![pref(&[("0", "1")]), pref(&[("0", "1")])];
        assert_eq!(avg(&same, &[0, 1], &IntervalSet::full()).unwrap(), rat(1, 2));
    }

    #[test]
    fn min_avg_examples() {
        let prefs = vec![pref(&[("0", "0.1")]), pref(&[("0", "1")])];
        assert_eq!(min_avg_subset(&prefs, &[0, 1], &IntervalSet::full()).unwrap(), vec![0]);
        let disjoint = vec![pref(&[("0", "0.25")]), pref(&[("0.5", "0.75")]), pref(&[("0.25", "0.5")])];
        assert_eq!(min_avg_subset(&disjoint, &[0, 1, 2], &IntervalSet::full()).unwrap(), vec![0]);
        // the pair averages 1/4, below either singleton
        let pair = vec![pref(&[("0", "0.5")]), pref(&[("0", "0.5")]), pref(&[("0", "1")])];
        assert_eq!(min_avg_subset(&pair, &[0, 1, 2], &IntervalSet::full()).unwrap(), vec![0, 1]);
    }

    #[test]
    fn exact_allocation_splits_identical_preferences_leftmost_first() {
        let prefs = vec![pref(&[("0", "1")]), pref(&[("0", "1")])];
        let a = exact_allocation(&prefs, &[0, 1], &IntervalSet::full()).unwrap();
        assert_eq!(a.portion(0), &set(&[("0", "0.5")]));
        assert_eq!(a.portion(1), &set(&[("0.5", "1")]));
    }

    #[test]
    fn exact_allocation_reports_infeasible_subsets() {
        let prefs = vec![pref(&[("0", "0.1")]), pref(&[("0", "1")])];
        assert!(matches!(exact_allocation(&prefs, &[0, 1], &IntervalSet::full()), Err(CakeError::Infeasible(_))));
    }

    #[test]
    fn procaccia_two_rounds() {
        let prefs = vec![pref(&[("0", "0.1")]), pref(&[("0", "1")])];
        let out = procaccia(&prefs).unwrap();
        assert_eq!(out.allocation.portion(0), &set(&[("0", "0.1")]));
        assert_eq!(out.allocation.portion(1), &set(&[("0.1", "1")]));
        let vals: Vec<Valuation> = prefs.iter().map(UniformPreference::to_valuation).collect();
        assert_eq!(equity_table(&vals, &out.allocation).unwrap().diagonal(), vec![one(), rat(9, 10)]);
        assert_eq!(out.rounds.len(), 2);
        assert!(out.rounds[0].avg <= out.rounds[1].avg);
    }

    #[test]
    fn procaccia_disjoint_preferences() {
        let prefs = vec![pref(&[("0", "0.2"), ("0.7", "0.8")]), pref(&[("0.3", "0.6")])];
        let out = procaccia(&prefs).unwrap();
        assert_eq!(out.allocation.portion(0), prefs[0].valued());
        assert_eq!(out.allocation.portion(1), prefs[1].valued());
    }

    #[test]
    fn zero_length_preference_rejected() {
        assert!(matches!(UniformPreference::new(IntervalSet::empty()), Err(CakeError::ZeroMass)));
    }
}
