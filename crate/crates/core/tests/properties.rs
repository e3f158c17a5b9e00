mod common;

use antsys::construction::{construct_tour, ConstructionContext};
use antsys::pheromone::evaporate;
use antsys::tsplib::parse_instance;
use antsys::{
    AntState, ChoiceInfo, DepositKernel, DepositStrategy, EdgeWeightType, InstanceSpec, NearestNeighborLists,
    PheromoneMatrix, ProblemInstance, RngStream, SelectionStrategy, SquareMatrix, StreamId, Tabu, TourBuffer,
    VisitedSet,
};
use proptest::prelude::*;
use rand::SeedableRng;

fn spec_strategy(max_n: usize) -> impl Strategy<Value = InstanceSpec> {
    (
        2..=max_n,
        prop_oneof![
            Just(EdgeWeightType::Euc2d),
            Just(EdgeWeightType::Ceil2d),
            Just(EdgeWeightType::Att)
        ],
    )
        .prop_flat_map(|(n, metric)| {
            prop::collection::vec((-5000.0..5000.0f64, -5000.0..5000.0f64), n).prop_map(move |coords| InstanceSpec {
                name: "prop".into(),
                dimension: n,
                edge_weight_type: metric,
                coords,
            })
        })
}

fn closed_tour(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|mut t| {
        t.push(t[0]);
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialisation_round_trips(spec in spec_strategy(40)) {
        let text = spec.to_tsplib();
        let parsed = parse_instance(text.as_bytes()).unwrap();
        prop_assert_eq!(&parsed, &spec);
        prop_assert_eq!(parsed.to_tsplib(), text);
    }

    #[test]
    fn reversed_tours_have_equal_length(
        (spec, tour) in spec_strategy(30).prop_flat_map(|s| { let n = s.dimension; (Just(s), closed_tour(n)) })
    ) {
        let problem = ProblemInstance::from_spec(&spec).unwrap();
        let forward = problem.tour_length(&tour).unwrap();
        let mut reversed = tour.clone();
        reversed.reverse();
        prop_assert_eq!(forward, problem.tour_length(&reversed).unwrap());
    }

    #[test]
    fn constructed_tours_are_permutations(
        n in 2usize..40,
        seed in any::<u64>(),
        which in 0usize..3,
        theta in 1usize..50,
    ) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let problem = common::random_instance(&mut rng, n);
        let nn = (n - 1).min(8);
        let lists = NearestNeighborLists::build(&problem, nn).unwrap();
        let tau = PheromoneMatrix::uniform(n, 0.5);
        let choice = ChoiceInfo::compute(&tau, &problem, 1.0, 2.0);
        let strategy = [
            SelectionStrategy::RouletteFull,
            SelectionStrategy::RouletteNn,
            SelectionStrategy::DataParallelTiled { tile_size: theta },
        ][which];
        let ctx = ConstructionContext { problem: &problem, choice: &choice, nn_lists: Some(&lists), strategy };
        for ant in 0..4u32 {
            let state = AntState::new(n, RngStream::new(seed, StreamId::new(0, ant, 0)));
            let built = construct_tour(&ctx, state, ant as usize % n).unwrap();
            prop_assert!(antsys::model::validate_closed_tour(n, &built.tour).is_ok());
            prop_assert_eq!(built.length, problem.tour_length(&built.tour).unwrap());
        }
    }

    #[test]
    fn choice_grows_with_trail(tau_a in 0.001..10.0f64, factor in 1.0001..5.0f64, alpha in 0.1..3.0f64, beta in 0.0..4.0f64) {
        let dist = SquareMatrix::from_fn(3, |i, j| if i == j { 0 } else { 7 });
        let problem = ProblemInstance::from_distances("p", dist).unwrap();
        let mut tau = PheromoneMatrix::uniform(3, tau_a);
        tau.set(0, 1, tau_a * factor);
        let choice = ChoiceInfo::compute(&tau, &problem, alpha, beta);
        prop_assert!(choice.get(0, 1) > choice.get(0, 2));
        prop_assert_eq!(choice.get(0, 0), 0.0);
    }

    #[test]
    fn visited_set_matches_bool_array(n in 1usize..200, picks in prop::collection::vec(any::<prop::sample::Index>(), 0..200)) {
        let mut bits = VisitedSet::new(n);
        let mut bools = vec![false; n];
        for p in picks {
            let c = p.index(n);
            prop_assert_eq!(bits.insert(c), !bools[c]);
            bools[c] = true;
            prop_assert_eq!(bits.unvisited().collect::<Vec<_>>(), Tabu::unvisited(&bools).collect::<Vec<_>>());
        }
        prop_assert_eq!(bits.count(), bools.iter().filter(|&&b| b).count());
        prop_assert_eq!(bits.is_full(), bools.iter().all(|&b| b));
    }

    #[test]
    fn evaporation_keeps_argmax(values in prop::collection::vec(0.0..100.0f64, 16), rho in 0.01..0.99f64) {
        let mut tau = PheromoneMatrix::from_matrix(SquareMatrix::from_vec(4, values).unwrap());
        let argmax = |t: &PheromoneMatrix| {
            let s = t.matrix().as_slice();
            (0..s.len()).fold(0, |b, k| if s[k] > s[b] { k } else { b })
        };
        let before = argmax(&tau);
        evaporate(&mut tau, rho);
        prop_assert_eq!(before, argmax(&tau));
    }

    #[test]
    fn deposit_kernels_agree(n in 3usize..25, m in 1usize..25, theta in 1usize..40, seed in any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let problem = common::random_instance(&mut rng, n);
        let tours = common::random_tours(&mut rng, &problem, m, 1);
        let start = PheromoneMatrix::uniform(n, 0.25);
        let mut results: Vec<PheromoneMatrix> = Vec::new();
        for strategy in DepositStrategy::all(theta) {
            let padded: TourBuffer = tours.repad(strategy.tile_size().unwrap_or(1)).unwrap();
            let mut tau = start.clone();
            strategy.deposit(&mut tau, &padded).unwrap();
            prop_assert!(tau.is_symmetric());
            results.push(tau);
        }
        for r in &results[1..] {
            prop_assert!(results[0].matrix().max_abs_diff(r.matrix()).0 <= 1e-9);
        }
    }
}
