//! Equilibria of the Length Game under piecewise uniform preferences.

use crate::allocation::Allocation;
use crate::error::{CakeError, Result};
use crate::interval::{union_all, IntervalSet};
use crate::rational::{int, zero, Rational};
use crate::uniform::{length_game, Profile, UniformPreference};

/// A profile whose Length Game allocation is the profile itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedProfile {
    profile: Profile,
}

impl ReducedProfile {
    /// Accepts `profile` only if it is already reduced.
    pub fn certify(profile: Profile) -> Result<Self> {
        if length_game(&profile).portions() == profile.strategies() {
            Ok(ReducedProfile { profile })
        } else {
            Err(CakeError::NotReduced)
        }
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn allocation(&self) -> Allocation {
        Allocation::new(self.profile.strategies().to_vec()).expect("reduced profiles are disjoint")
    }

    pub fn into_profile(self) -> Profile {
        self.profile
    }
}

/// Replaces every strategy with what the agent actually receives.
pub fn reduce_profile(profile: &Profile) -> ReducedProfile {
    ReducedProfile { profile: Profile::new(length_game(profile).into_portions()) }
}

/// The part of `P_i` nobody else values.
pub fn uncontested_region(prefs: &[UniformPreference], agent: usize) -> IntervalSet {
    let others: Vec<IntervalSet> =
        prefs.iter().enumerate().filter(|(j, _)| *j != agent).map(|(_, p)| p.valued().clone()).collect();
    prefs[agent].valued().difference(&union_all(&others))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Valued cake that no strategy claims.
    UnallocatedValuedCake(IntervalSet),
    /// `first` holds cake `second` values while claiming strictly more.
    LengthOrderViolation { first: usize, second: usize, witness: IntervalSet },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquilibriumReport {
    pub is_equilibrium: bool,
    pub violation: Option<Violation>,
    pub deviating_agent: Option<(usize, IntervalSet)>,
}

pub fn is_equilibrium(prefs: &[UniformPreference], reduced: &ReducedProfile) -> Result<EquilibriumReport> {
    let profile = reduced.profile();
    if profile.n() != prefs.len() {
        return Err(CakeError::DimensionMismatch { expected: prefs.len(), found: profile.n() });
    }
    if let Some(i) = (0..prefs.len()).find(|&i| !prefs[i].valued().contains_set(profile.strategy(i))) {
        return Err(CakeError::NotWellBehaved(i));
    }
    ReducedProfile::certify(profile.clone())?;

    let valued = union_all(prefs.iter().map(UniformPreference::valued));
    let claimed = union_all(profile.strategies());
    let uncovered = valued.difference(&claimed);
    let mut violation = None;
    if !uncovered.is_empty() {
        violation = Some(Violation::UnallocatedValuedCake(uncovered));
    } else {
        'outer: for i in 0..prefs.len() {
            for (j, pref) in prefs.iter().enumerate() {
                let witness = profile.strategy(i).intersect(pref.valued());
                if i != j && !witness.is_empty() && profile.strategy(i).length() > profile.strategy(j).length() {
                    violation = Some(Violation::LengthOrderViolation { first: i, second: j, witness });
                    break 'outer;
                }
            }
        }
    }

    let mut deviating_agent = None;
    for i in 0..prefs.len() {
        let br = best_response(prefs, profile, i);
        if br.gain > zero() {
            deviating_agent = Some((i, br.strategy));
            break;
        }
    }
    Ok(EquilibriumReport { is_equilibrium: violation.is_none() && deviating_agent.is_none(), violation, deviating_agent })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestResponse {
    pub strategy: IntervalSet,
    /// Utility gain of `strategy` over the agent's current allocation.
    pub gain: Rational,
    /// False when the best achievable utility is a supremum no strategy
    /// reaches; `strategy` is then an improving one part of the way there.
    pub attained: bool,
    /// Gain at the supremum.
    pub supremum_gain: Rational,
}

/// Exact best response of `agent` over strategies inside its preference.
///
/// Claiming length `L` puts the agent behind every rival with a shorter claim
/// (or an equal claim and a lower index), so the most it can receive is the
/// smaller of `L` and what those rivals leave of `P_i`. That only changes at
/// the rivals' claim lengths, which makes the search finite.
pub fn best_response(prefs: &[UniformPreference], profile: &Profile, agent: usize) -> BestResponse {
    let valued = prefs[agent].valued();
    let full = valued.length();
    let current_alloc = length_game(profile);
    let current = current_alloc.portion(agent).intersect(valued).length();

    let lengths: Vec<Rational> = profile.strategies().iter().map(IntervalSet::length).collect();
    let unblocked = |blocks: &dyn Fn(usize) -> bool| -> IntervalSet {
        let blockers: Vec<&IntervalSet> =
            (0..prefs.len()).filter(|&j| j != agent && blocks(j)).map(|j| profile.strategy(j)).collect();
        valued.difference(&union_all(blockers))
    };

    let mut points: Vec<Rational> = lengths
        .iter()
        .enumerate()
        .filter(|(j, l)| *j != agent && **l > zero() && **l < full)
        .map(|(_, l)| l.clone())
        .collect();
    points.push(zero());
    points.push(full.clone());
    points.sort();
    points.dedup();

    // (value, claim length, cake the blockers leave)
    let mut best: (Rational, Rational, IntervalSet) = (zero(), zero(), IntervalSet::empty());
    let mut supremum: Option<(Rational, Rational)> = None;
    for (k, point) in points.iter().enumerate() {
        if k > 0 {
            let lo = &points[k - 1];
            let region = unblocked(&|j| lengths[j] <= *lo);
            let size = region.length();
            if size > *lo && size < *point {
                if size > best.0 {
                    best = (size.clone(), size, region);
                }
            } else if size >= *point && supremum.as_ref().is_none_or(|(v, _)| *point > *v) {
                supremum = Some((point.clone(), lo.clone()));
            }
        }
        let region = unblocked(&|j| lengths[j] < *point || (lengths[j] == *point && j < agent));
        let value = if region.length() < *point { region.length() } else { point.clone() };
        if value > best.0 {
            best = (value, point.clone(), region);
        }
    }

    let (mut value, mut length, region) = best;
    let mut attained = true;
    let mut supremum_value = value.clone();
    if let Some((sup, lo)) = supremum {
        if sup > value {
            let floor = if lo > value { lo } else { value.clone() };
            length = (floor + &sup) / int(2);
            value = length.clone();
            attained = false;
            supremum_value = sup;
        }
    }
    if value <= current {
        return BestResponse {
            strategy: profile.strategy(agent).clone(),
            gain: zero(),
            attained: true,
            supremum_gain: zero(),
        };
    }
    let region = if attained {
        region
    } else {
        let lo_len = length.clone();
        unblocked(&|j| lengths[j] < lo_len)
    };
    let strategy = build_strategy(valued, &region, &length, current_alloc.portion(agent), &current_alloc);
    BestResponse {
        strategy,
        gain: (&value - &current) / &full,
        attained,
        supremum_gain: (supremum_value - current) / full,
    }
}

/// A subset of `valued` of the given length that takes as much of `region`
/// as possible: first cake the agent already holds, then unclaimed cake, then
/// other agents' cake from the left, padding from outside `region` if needed.
fn build_strategy(
    valued: &IntervalSet,
    region: &IntervalSet,
    length: &Rational,
    own: &IntervalSet,
    allocation: &Allocation,
) -> IntervalSet {
    let held = region.intersect(own);
    let free = region.difference(&allocation.allocated());
    let rest = region.difference(&held).difference(&free);
    let mut strategy = IntervalSet::empty();
    for source in [held, free, rest, valued.difference(region)] {
        let need = length - strategy.length();
        if need <= zero() {
            break;
        }
        strategy = strategy.union(&source.take_prefix(&need));
    }
    strategy
}

/// Why best-response dynamics stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DynamicsStop {
    /// A full round without an improving move.
    Fixpoint,
    RoundLimit,
    /// Some agent's best utility stayed an unattained supremum for
    /// [`CHASE_ROUNDS`] consecutive rounds; each such move only closes part of
    /// the gap, so exact dynamics approach the limit without reaching it.
    SupremumChase { agent: usize },
}

pub const CHASE_ROUNDS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicsOutcome {
    pub profile: ReducedProfile,
    pub converged: bool,
    pub stop: DynamicsStop,
    pub rounds: usize,
}

/// Round-robin best responses in index order, reducing after each move,
/// until a full round makes no improving move, `max_rounds` is used up, or an
/// agent keeps chasing a supremum.
pub fn best_response_dynamics(prefs: &[UniformPreference], start: &Profile, max_rounds: usize) -> DynamicsOutcome {
    let mut profile = reduce_profile(start);
    let mut chasing = vec![0usize; prefs.len()];
    for round in 1..=max_rounds {
        let mut moved = false;
        for i in 0..prefs.len() {
            let br = best_response(prefs, profile.profile(), i);
            if br.gain > zero() {
                chasing[i] = if br.attained { 0 } else { chasing[i] + 1 };
                profile = reduce_profile(&profile.profile().with_strategy(i, br.strategy));
                moved = true;
            } else {
                chasing[i] = 0;
            }
        }
        if !moved {
            return DynamicsOutcome { profile, converged: true, stop: DynamicsStop::Fixpoint, rounds: round };
        }
        if let Some(agent) = chasing.iter().position(|&c| c >= CHASE_ROUNDS) {
            return DynamicsOutcome { profile, converged: false, stop: DynamicsStop::SupremumChase { agent }, rounds: round };
        }
    }
    DynamicsOutcome { profile, converged: false, stop: DynamicsStop::RoundLimit, rounds: max_rounds }
}

pub fn default_max_rounds(n: usize) -> usize {
    100 * n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, rat};
    use crate::uniform::procaccia;

    fn set(pairs: &[(&str, &str)]) -> IntervalSet {
        IntervalSet::from_pairs(pairs.iter().map(|(a, b)| (parse_rational(a).unwrap(), parse_rational(b).unwrap())))
            .unwrap()
    }

    fn prefs(sets: &[&[(&str, &str)]]) -> Vec<UniformPreference> {
        sets.iter().map(|s| UniformPreference::new(set(s)).unwrap()).collect()
    }

    fn example() -> Vec<UniformPreference> {
        prefs(&[&[("0", "0.5")], &[("0", "0.6")], &[("0.5", "1")]])
    }

    #[test]
    fn reduction_examples() {
        let p = Profile::new(vec![set(&[("0", "0.4")]), set(&[("0.1", "0.5")]), set(&[("0.5", "1")])]);
        let r = reduce_profile(&p);
        assert_eq!(
            r.profile().strategies(),
            &[set(&[("0", "0.4")]), set(&[("0.4", "0.5")]), set(&[("0.5", "1")])]
        );
        assert_eq!(reduce_profile(r.profile()), r);
        let disjoint = Profile::new(vec![set(&[("0", "0.1")]), set(&[("0.1", "0.5")]), set(&[("0.5", "1")])]);
        assert_eq!(reduce_profile(&disjoint).profile(), &disjoint);
        assert!(matches!(ReducedProfile::certify(p), Err(CakeError::NotReduced)));
    }

    #[test]
    fn uncontested_examples() {
        let p = example();
        assert!(uncontested_region(&p, 0).is_empty());
        assert!(uncontested_region(&p, 1).is_empty());
        assert_eq!(uncontested_region(&p, 2), set(&[("0.6", "1")]));
    }

    #[test]
    fn detects_unallocated_valued_cake() {
        let p = example();
        let profile = Profile::new(vec![set(&[("0", "0.1")]), set(&[("0.1", "0.5")]), set(&[("0.6", "1")])]);
        let report = is_equilibrium(&p, &ReducedProfile::certify(profile).unwrap()).unwrap();
        assert!(!report.is_equilibrium);
        assert_eq!(report.violation, Some(Violation::UnallocatedValuedCake(set(&[("0.5", "0.6")]))));
        assert!(report.deviating_agent.is_some());
    }

    #[test]
    fn detects_length_order_violation() {
        let p = example();
        let profile = Profile::new(vec![set(&[("0", "0.1")]), set(&[("0.1", "0.5")]), set(&[("0.5", "1")])]);
        let report = is_equilibrium(&p, &ReducedProfile::certify(profile).unwrap()).unwrap();
        assert_eq!(
            report.violation,
            Some(Violation::LengthOrderViolation { first: 1, second: 0, witness: set(&[("0.1", "0.5")]) })
        );
    }

    #[test]
    fn rejects_ill_behaved_profiles() {
        let p = example();
        let profile = Profile::new(vec![set(&[("0", "0.1")]), set(&[("0.1", "0.5")]), set(&[("0.5", "0.9")])]);
        let bad = Profile::new(vec![set(&[("0.6", "0.7")]), set(&[("0", "0.5")]), set(&[("0.7", "1")])]);
        assert!(is_equilibrium(&p, &ReducedProfile::certify(profile).unwrap()).is_ok());
        assert!(matches!(
            is_equilibrium(&p, &ReducedProfile::certify(bad).unwrap()),
            Err(CakeError::NotWellBehaved(0))
        ));
    }

    #[test]
    fn agent_claims_the_contested_strip() {
        let p = example();
        let profile = Profile::new(vec![set(&[("0", "0.1")]), set(&[("0.1", "0.5")]), set(&[("0.5", "1")])]);
        let br = best_response(&p, &profile, 1);
        assert_eq!(br.strategy, set(&[("0.1", "0.6")]));
        assert_eq!(br.gain, rat(1, 6));
        assert!(br.attained);
    }

    #[test]
    fn lone_agent_claims_everything() {
        let p = prefs(&[&[("0.2", "0.7")]]);
        let profile = Profile::new(vec![set(&[("0.2", "0.3")])]);
        let br = best_response(&p, &profile, 0);
        assert_eq!(br.strategy, set(&[("0.2", "0.7")]));
        assert_eq!(br.gain, rat(4, 5));
    }

    #[test]
    fn open_supremum_returns_an_improving_strategy() {
        // agent 1 must stay strictly shorter than agent 0 to win the overlap
        let p = prefs(&[&[("0", "0.5")], &[("0", "0.6")]]);
        let profile = Profile::new(vec![set(&[("0", "0.3")]), set(&[("0.3", "0.6")])]);
        let br = best_response(&p, &profile, 1);
        assert_eq!(br.gain, zero());
        let profile = Profile::new(vec![set(&[("0", "0.4")]), set(&[("0.5", "0.6")])]);
        let br = best_response(&p, &profile, 1);
        assert!(!br.attained);
        assert_eq!(br.gain, rat(1, 3));
        assert_eq!(br.supremum_gain, rat(1, 2));
        assert_eq!(br.strategy, set(&[("0", "0.1"), ("0.4", "0.6")]));
    }

    #[test]
    fn dynamics_stop_on_a_supremum_chase() {
        let p = prefs(&[&[("0.5", "1")], &[("0", "1")], &[("0.25", "0.75")]]);
        let out = best_response_dynamics(&p, &Profile::sincere(&p), default_max_rounds(3));
        assert!(!out.converged);
        assert_eq!(out.stop, DynamicsStop::SupremumChase { agent: 1 });
        assert_eq!(out.rounds, CHASE_ROUNDS);
    }

    #[test]
    fn procaccia_output_is_an_equilibrium() {
        let p = example();
        let out = procaccia(&p).unwrap();
        let reduced = reduce_profile(&Profile::new(out.allocation.portions().to_vec()));
        let report = is_equilibrium(&p, &reduced).unwrap();
        assert!(report.is_equilibrium, "{report:?}");
        for i in 0..3 {
            assert_eq!(best_response(&p, reduced.profile(), i).gain, zero());
        }
    }

    #[test]
    fn dynamics_from_sincere_disjoint_start() {
        let p = prefs(&[&[("0", "0.3")], &[("0.3", "1")]]);
        let out = best_response_dynamics(&p, &Profile::sincere(&p), default_max_rounds(2));
        assert!(out.converged);
        assert_eq!(out.rounds, 1);
    }

    #[test]
    fn dynamics_reach_the_example_equilibrium() {
        let p = example();
        let out = best_response_dynamics(&p, &Profile::sincere(&p), default_max_rounds(3));
        assert!(out.converged);
        assert!(is_equilibrium(&p, &out.profile).unwrap().is_equilibrium);
    }
}
