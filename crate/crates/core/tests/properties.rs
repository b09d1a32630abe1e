use faircake::equilibrium::{is_equilibrium, reduce_profile, uncontested_region, ReducedProfile};
use faircake::generate::InstanceGenerator;
use faircake::interval::IntervalSet;
use faircake::lp::{max_ee, max_ue, solve, utilitarian_optimal, ConstraintKind, FairnessConstraint, LpProblem, LpStatus};
use faircake::rational::{int, rat, zero, Rational};
use faircake::uniform::{length_game, lex_order, procaccia, AgentOrder, Profile, UniformPreference};
use faircake::valuation::Valuation;
use proptest::prelude::*;

const GRID: i64 = 64;

fn grid_point() -> impl Strategy<Value = Rational> {
    (0..=GRID).prop_map(|k| rat(k, GRID))
}

fn interval_set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((0..=GRID, 0..=GRID), 0..5).prop_map(|pairs| {
        IntervalSet::from_pairs(
            pairs.into_iter().map(|(a, b)| if a <= b { (rat(a, GRID), rat(b, GRID)) } else { (rat(b, GRID), rat(a, GRID)) }),
        )
        .unwrap()
    })
}

fn total_utility(vals: &[Valuation], a: &faircake::allocation::Allocation) -> Rational {
    vals.iter().enumerate().fold(zero(), |acc, (i, v)| acc + v.eval(a.portion(i)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn set_algebra_laws(a in interval_set(), b in interval_set(), c in interval_set()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert_eq!(a.union(&b.intersect(&c)), a.union(&b).intersect(&a.union(&c)));
        prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
        prop_assert_eq!(a.difference(&b), a.intersect(&b.complement()));
        prop_assert_eq!(a.union(&b).length() + a.intersect(&b).length(), a.length() + b.length());
        prop_assert_eq!(IntervalSet::from_intervals(a.intervals().iter().cloned()), a.clone());
    }

    #[test]
    fn canonical_sets_are_sorted_and_separated(a in interval_set()) {
        for w in a.intervals().windows(2) {
            prop_assert!(w[0].hi() < w[1].lo());
        }
        prop_assert!(a.intervals().iter().all(|i| !i.is_degenerate()));
    }

    #[test]
    fn eval_is_additive_and_cut_inverts_it(seed in any::<u64>(), x in grid_point(), y in grid_point(), z in grid_point()) {
        let v = InstanceGenerator::new(seed).constant_valuation();
        let mut p = [x, y, z];
        p.sort();
        prop_assert_eq!(v.eval_interval(&p[0], &p[2]), v.eval_interval(&p[0], &p[1]) + v.eval_interval(&p[1], &p[2]));
        let target = v.eval_interval(&p[0], &p[2]);
        let cut = v.cut(&p[0], &target).unwrap();
        prop_assert!(cut.exact);
        prop_assert_eq!(v.eval_interval(&p[0], &cut.point), target);
        prop_assert!(cut.point <= p[2]);
    }

    #[test]
    fn lp_duality_holds(
        objective in prop::collection::vec(0i64..6, 3),
        rows in prop::collection::vec((prop::collection::vec(0i64..5, 3), 1i64..10), 1..4),
    ) {
        let mut lp = LpProblem::new(3);
        lp.objective = objective.iter().map(|&c| int(c)).collect();
        for (coeffs, rhs) in &rows {
            lp.add(coeffs.iter().enumerate().map(|(j, &a)| (j, int(a))).collect(), ConstraintKind::Le, int(*rhs));
        }
        let primal = solve(&lp);
        let dual = solve(&lp.dual());
        match primal.status {
            LpStatus::Optimal => {
                prop_assert!(lp.is_feasible(&primal.x));
                prop_assert_eq!(lp.objective_at(&primal.x), primal.value.clone());
                prop_assert_eq!(dual.status, LpStatus::Optimal);
                prop_assert_eq!(dual.value, -primal.value);
            }
            LpStatus::Unbounded => prop_assert_eq!(dual.status, LpStatus::Infeasible),
            LpStatus::Infeasible => prop_assert!(false, "origin is feasible"),
        }
    }

    #[test]
    fn lex_order_gives_disjoint_subsets_of_claims(seed in any::<u64>(), n in 1usize..6) {
        let mut g = InstanceGenerator::new(seed);
        let prefs = g.uniform_preferences(n);
        let profile = g.well_behaved_profile(&prefs);
        let a = lex_order(&profile, &AgentOrder::identity(n)).unwrap();
        for i in 0..n {
            prop_assert!(profile.strategy(i).contains_set(a.portion(i)));
            for j in i + 1..n {
                prop_assert!(a.portion(i).is_disjoint(a.portion(j)));
            }
        }
    }

    #[test]
    fn procaccia_rounds_and_coverage(seed in any::<u64>(), n in 1usize..7) {
        let prefs = InstanceGenerator::new(seed).uniform_preferences(n);
        let out = procaccia(&prefs).unwrap();
        for w in out.rounds.windows(2) {
            prop_assert!(w[0].avg <= w[1].avg);
        }
        let wanted = prefs.iter().fold(IntervalSet::empty(), |acc, p| acc.union(p.valued()));
        prop_assert_eq!(out.allocation.allocated(), wanted);
        for (i, p) in prefs.iter().enumerate() {
            prop_assert!(p.valued().contains_set(out.allocation.portion(i)));
        }
    }

    #[test]
    fn reduction_preserves_the_allocation(seed in any::<u64>(), n in 1usize..6) {
        let mut g = InstanceGenerator::new(seed);
        let prefs = g.uniform_preferences(n);
        let profile = g.well_behaved_profile(&prefs);
        let reduced = reduce_profile(&profile);
        prop_assert_eq!(length_game(reduced.profile()), length_game(&profile));
        prop_assert_eq!(reduce_profile(reduced.profile()), reduced);
    }

    #[test]
    fn equilibria_cover_uncontested_regions(seed in any::<u64>(), n in 1usize..6) {
        let prefs = InstanceGenerator::new(seed).uniform_preferences(n);
        let out = procaccia(&prefs).unwrap();
        let eq = ReducedProfile::certify(Profile::new(out.allocation.portions().to_vec())).unwrap();
        prop_assert!(is_equilibrium(&prefs, &eq).unwrap().is_equilibrium);
        for i in 0..n {
            prop_assert!(eq.profile().strategy(i).contains_set(&uncontested_region(&prefs, i)));
        }
    }

    #[test]
    fn egalitarian_optimum_bounds_utilitarian(seed in any::<u64>(), n in 1usize..4) {
        let vals = InstanceGenerator::new(seed).constant_valuations(n);
        let ue = max_ue(&vals, FairnessConstraint::None).unwrap().value;
        let ee = max_ee(&vals).unwrap().value;
        prop_assert!(int(n as i64) * ee <= ue);
        prop_assert_eq!(total_utility(&vals, &utilitarian_optimal(&vals).unwrap()), ue);
    }

    #[test]
    fn sincere_length_game_is_utilitarian_optimal(seed in any::<u64>(), n in 1usize..5) {
        let prefs = InstanceGenerator::new(seed).uniform_preferences(n);
        let vals: Vec<Valuation> = prefs.iter().map(UniformPreference::to_valuation).collect();
        let a = length_game(&Profile::sincere(&prefs));
        prop_assert_eq!(total_utility(&vals, &a), max_ue(&vals, FairnessConstraint::None).unwrap().value);
    }
}
