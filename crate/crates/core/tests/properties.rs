use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stratafix::lp::{
    collapse, infinite_valued_model, random_program, sqle_by_level_sets, tp_saturating, wfs_oracle,
    RandomProgramParams,
};
use stratafix::truth::{tv_and, tv_le, tv_or, tv_sqle_alpha};
use stratafix::zoo::{Interpretation, InterpretationModel};
use stratafix::{StratifiedLattice, TruthValue};

const KAPPA: usize = 4;

fn truth_value(kappa: usize) -> impl Strategy<Value = TruthValue> {
    prop_oneof![
        (0..kappa as u32).prop_map(TruthValue::False),
        Just(TruthValue::Undefined),
        (0..kappa as u32).prop_map(TruthValue::True),
    ]
}

fn interpretation(n: usize) -> impl Strategy<Value = Interpretation> {
    prop::collection::vec(truth_value(KAPPA), n).prop_map(Interpretation::new)
}

proptest! {
    #[test]
    fn display_round_trips(v in truth_value(1000)) {
        prop_assert_eq!(v.to_string().parse::<TruthValue>().unwrap(), v);
        let json = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(json, format!("\"{v}\""));
    }

    #[test]
    fn and_or_form_a_distributive_lattice(a in truth_value(KAPPA), b in truth_value(KAPPA), c in truth_value(KAPPA)) {
        prop_assert_eq!(tv_and(a, b), tv_and(b, a));
        prop_assert_eq!(tv_or(a, tv_or(b, c)), tv_or(tv_or(a, b), c));
        prop_assert_eq!(tv_and(a, tv_or(a, b)), a);
        prop_assert_eq!(tv_and(a, tv_or(b, c)), tv_or(tv_and(a, b), tv_and(a, c)));
        prop_assert!(tv_le(tv_and(a, b), a) && tv_le(a, tv_or(a, b)));
    }

    #[test]
    fn negation_is_an_order_reversal_shifted_one_stage(a in truth_value(KAPPA), b in truth_value(KAPPA)) {
        prop_assert_eq!(a.negate().negate().order().map(|o| o - 2), a.order());
        if tv_le(a, b) {
            prop_assert!(tv_le(b.negate(), a.negate()));
        }
    }

    #[test]
    fn stage_relations_nest(a in truth_value(KAPPA), b in truth_value(KAPPA), alpha in 1..KAPPA) {
        // Agreeing at a later stage implies agreeing at every earlier one.
        if tv_sqle_alpha(alpha, a, b) && tv_sqle_alpha(alpha, b, a) {
            prop_assert!(tv_sqle_alpha(alpha - 1, a, b) && tv_sqle_alpha(alpha - 1, b, a));
        }
    }

    #[test]
    fn level_sets_decide_the_interpretation_order(i in interpretation(4), j in interpretation(4)) {
        let model = InterpretationModel::with_size(4, KAPPA).unwrap();
        prop_assert_eq!(sqle_by_level_sets(&i, &j), model.sqle(&i, &j));
        // i ⊑ j iff i = j or i ⊏_α j at some stage.
        let strict = (0..KAPPA).any(|a| {
            let s = model.stage(a).unwrap();
            model.sqle_alpha(s, &i, &j) && !model.sqle_alpha(s, &j, &i)
        });
        prop_assert_eq!(model.sqle(&i, &j), i == j || strict);
    }

    #[test]
    fn saturated_operator_is_monotone(seed in any::<u64>(), i in interpretation(3), j in interpretation(3)) {
        let params = RandomProgramParams { max_atoms: 3, ..RandomProgramParams::default() };
        let program = random_program(&mut ChaCha8Rng::seed_from_u64(seed), params);
        prop_assume!(program.atoms().len() == 3);
        let model = InterpretationModel::with_size(3, KAPPA).unwrap();
        for alpha in 0..KAPPA {
            let s = model.stage(alpha).unwrap();
            if model.sqle_alpha(s, &i, &j) {
                let (ti, tj) = (tp_saturating(&program, KAPPA, &i), tp_saturating(&program, KAPPA, &j));
                prop_assert!(model.sqle_alpha(s, &ti, &tj), "stage {} on {} vs {}", alpha, i, j);
            }
        }
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let program = random_program(&mut ChaCha8Rng::seed_from_u64(seed), RandomProgramParams::default());
        prop_assert!(program.is_normalized());
        prop_assert_eq!(program.normalize(), program);
    }

    #[test]
    fn collapse_matches_alternating_fixpoint(seed in any::<u64>()) {
        let params = RandomProgramParams { max_atoms: 8, max_rules: 16, ..RandomProgramParams::default() };
        let program = random_program(&mut ChaCha8Rng::seed_from_u64(seed), params);
        let m = infinite_valued_model(&program, None).unwrap();
        prop_assert_eq!(collapse(&m.model), wfs_oracle(&program));
    }
}
