use proptest::prelude::*;
use qlgas::node::{builtin_diffusion_unitary, induced_stochastic, ChannelOccupations};
use qlgas::oracle::{lb_collide, markov_power_iterate, MarkovDistribution};
use qlgas::random::haar_unitary;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Explicit enumeration: probability of every occupation pattern, pushed
/// through `A`, then summed per channel.
fn enumerate_collision(f: &[f64], a: &qlgas::InducedStochasticMatrix) -> Vec<f64> {
    let b = f.len();
    let dim = 1 << b;
    let mut out = vec![0.0; b];
    for p in 0..dim {
        let bits_p: Vec<bool> = (0..b).map(|i| (p >> (b - 1 - i)) & 1 == 1).collect();
        let mut np = 0.0;
        for m in 0..dim {
            let mut prob = 1.0;
            for (i, &fi) in f.iter().enumerate() {
                prob *= if (m >> (b - 1 - i)) & 1 == 1 { fi } else { 1.0 - fi };
            }
            np += a.get(p, m) * prob;
        }
        for (i, &occupied) in bits_p.iter().enumerate() {
            if occupied {
                out[i] += np;
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lb_collide_matches_enumeration(seed in any::<u64>(), b in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = induced_stochastic(&haar_unitary(b, &mut rng));
        let f: Vec<f64> = (0..b).map(|_| rng.random_range(0.0..=1.0)).collect();
        let got = lb_collide(&ChannelOccupations::new(f.clone()).unwrap(), &a).unwrap();
        for (x, y) in got.values().iter().zip(enumerate_collision(&f, &a)) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn diffusion_collision_conserves_channel_sum(f1 in 0.0f64..=1.0, f2 in 0.0f64..=1.0) {
        let a = induced_stochastic(&builtin_diffusion_unitary());
        let out = lb_collide(&ChannelOccupations::new(vec![f1, f2]).unwrap(), &a).unwrap();
        prop_assert!((out.values().iter().sum::<f64>() - (f1 + f2)).abs() <= 1e-15);
    }

    #[test]
    fn doubly_stochastic_iteration_never_lowers_entropy(seed in any::<u64>(), b in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = induced_stochastic(&haar_unitary(b, &mut rng));
        let raw: Vec<f64> = (0..1 << b).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut p = MarkovDistribution::new(raw.iter().map(|x| x / total).collect()).unwrap();
        for _ in 0..10 {
            let next = markov_power_iterate(&a, &p, 1).unwrap();
            prop_assert!(next.entropy() >= p.entropy() - 1e-12);
            prop_assert!((next.values().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            p = next;
        }
    }

    #[test]
    fn uniform_is_stationary(seed in any::<u64>(), b in 1usize..=3) {
        let a = induced_stochastic(&haar_unitary(b, &mut StdRng::seed_from_u64(seed)));
        let u = MarkovDistribution::uniform(1 << b);
        let out = markov_power_iterate(&a, &u, 25).unwrap();
        for (x, y) in out.values().iter().zip(u.values()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }
}
