//! Desk-scale simulation of the superposition scheme on small discrete
//! instances: codebooks, likelihood encoder, typicality decoder,
//! reconstruction, and exact leakage of a fixed codebook.
//!
//! Blocklengths are tiny, so the outputs show trends and orderings rather
//! than asymptotic guarantees.

pub mod codebook;
pub mod experiment;
pub mod leakage;
pub mod model;
pub mod scheme;

pub use codebook::{codeword_count, gen_codebooks, CodeSizes, Codebook, SYMBOL_CAP};
pub use experiment::{run_experiment, run_with_model, wilson_interval, LeakageMethod, SimConfig, SimResult};
pub use leakage::{check_leakage_caps, estimate_leakage_exact, LEAKAGE_CAP};
pub use model::SchemeModel;
pub use scheme::{decode, likelihood_encode, reconstruct, transmit, typical_triples};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmc::model::{Alphabets, AuxChannel, DmcScenario};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Y = X xor S, Z = X through BSC(0.2), Ξ = S, S uniform.
    fn xor_channel() -> DmcScenario {
        let mut yz = vec![vec![vec![vec![0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for s in 0..2 {
                for z in 0..2 {
                    yz[x][s][x ^ s][z] = if z == x { 0.8 } else { 0.2 };
                }
            }
        }
        DmcScenario {
            alphabets: Alphabets { s: 2, xi: 2, x: 2, y: 2, z: 2, s_hat: 2 },
            p_s: vec![0.5, 0.5],
            p_xi_given_s: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            p_yz_given_xs: yz,
            distortion: DmcScenario::hamming(2),
        }
    }

    /// U constant, X = B ~ Bern(0.25), V = S xor B.
    fn xor_aux() -> AuxChannel {
        let rows = (0..2)
            .map(|s| {
                let mut r = vec![0.0; 4];
                for b in 0..2 {
                    r[(s ^ b) * 2 + b] = if b == 0 { 0.75 } else { 0.25 };
                }
                r
            })
            .collect::<Vec<_>>();
        AuxChannel::from_rows(1, 2, 2, &rows)
    }

    /// Two-valued U correlated with S, for frequency tests.
    fn two_level_aux() -> AuxChannel {
        let rows = vec![
            vec![0.3, 0.1, 0.1, 0.1, 0.1, 0.1, 0.05, 0.15],
            vec![0.05, 0.05, 0.1, 0.1, 0.2, 0.1, 0.2, 0.2],
        ];
        AuxChannel::from_rows(2, 2, 2, &rows)
    }

    #[test]
    fn zero_rates_give_single_codewords() {
        let sz = CodeSizes::new(7, 0.0, 0.0, 0.0, SYMBOL_CAP).unwrap();
        assert_eq!((sz.n_i, sz.n_m, sz.n_j), (1, 1, 1));
        assert_eq!(codeword_count(4, 0.1), 2.0); // e^0.4 = 1.49
        assert_eq!(codeword_count(10, 0.1), 3.0);
    }

    #[test]
    fn symbol_cap_names_dimension() {
        let err = CodeSizes::new(20, 0.0, 0.5, 0.5, 1000).unwrap_err();
        match err {
            crate::Error::CapExceeded { dimension, .. } => assert!(dimension.contains("codebook symbols")),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn codebook_deterministic_and_frequencies_match() {
        let model = SchemeModel::new(&xor_channel(), &two_level_aux()).unwrap();
        let sizes = CodeSizes::new(100, 0.07, 0.0, 0.0, 1 << 24).unwrap();
        let a = gen_codebooks(&model, sizes, 9);
        assert_eq!(a, gen_codebooks(&model, sizes, 9));
        assert_ne!(a, gen_codebooks(&model, sizes, 10));
        let total = sizes.n_i * sizes.n;
        assert!(total >= 100_000);
        let ones = (0..sizes.n_i).flat_map(|i| a.u(i).iter()).filter(|&&u| u == 1).count();
        let p = model.p_u[1];
        let sd = (total as f64 * p * (1.0 - p)).sqrt();
        assert!((ones as f64 - total as f64 * p).abs() < 3.0 * sd, "{ones} vs {}", total as f64 * p);
    }

    #[test]
    fn upper_level_follows_conditional() {
        let model = SchemeModel::new(&xor_channel(), &two_level_aux()).unwrap();
        let sizes = CodeSizes::new(50, 0.06, 0.0, 0.1, 1 << 24).unwrap();
        let cb = gen_codebooks(&model, sizes, 3);
        let mut counts = [[0usize; 2]; 2];
        for i in 0..sizes.n_i {
            for j in 0..sizes.n_j {
                for (&u, &v) in cb.u(i).iter().zip(cb.v(i, 0, j)) {
                    counts[u as usize][v as usize] += 1;
                }
            }
        }
        for u in 0..2 {
            let tot = (counts[u][0] + counts[u][1]) as f64;
            let p = model.p_v_given_u[u][1];
            let sd = (tot * p * (1.0 - p)).sqrt();
            assert!((counts[u][1] as f64 - tot * p).abs() < 3.0 * sd);
        }
    }

    #[test]
    fn likelihood_encoder_three_to_one() {
        let model = SchemeModel::new(&xor_channel(), &xor_aux()).unwrap();
        // P(S=0|V=0) = 0.75, P(S=0|V=1) = 0.25.
        let sizes = CodeSizes { n: 1, n_i: 1, n_m: 1, n_j: 2 };
        let cb = Codebook::from_words(sizes, vec![0], vec![0, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws = 10_000;
        let first = (0..draws)
            .filter(|_| likelihood_encode(&model, &cb, 0, &[0], &mut rng) == Some((0, 0)))
            .count();
        let sd = (draws as f64 * 0.75 * 0.25).sqrt();
        assert!((first as f64 - 7500.0).abs() < 3.0 * sd, "{first}");
    }

    #[test]
    fn single_pair_always_chosen_and_failure_detected() {
        let model = SchemeModel::new(&xor_channel(), &xor_aux()).unwrap();
        let sizes = CodeSizes { n: 1, n_i: 1, n_m: 1, n_j: 1 };
        let cb = Codebook::from_words(sizes, vec![0], vec![0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(likelihood_encode(&model, &cb, 0, &[1], &mut rng), Some((0, 0)));
        assert!(scheme::encoder_distribution(&[f64::NEG_INFINITY; 3]).is_none());
    }

    #[test]
    fn decoder_rejects_unrelated_outputs() {
        let model = SchemeModel::new(&xor_channel(), &xor_aux()).unwrap();
        let sizes = CodeSizes::new(12, 0.0, 0.0, 0.0, SYMBOL_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let trials = 2000;
        let mut hits = 0;
        for t in 0..trials {
            let cb = gen_codebooks(&model, sizes, t);
            let y: Vec<usize> = (0..12).map(|_| rand::Rng::random_range(&mut rng, 0..2)).collect();
            if decode(&model, &cb, &y, 0.1, &mut rng).is_some() {
                hits += 1;
            }
        }
        assert!((hits as f64) < 0.05 * trials as f64, "{hits}");
    }

    #[test]
    fn decoder_ties_are_uniform() {
        let model = SchemeModel::new(&xor_channel(), &xor_aux()).unwrap();
        let sizes = CodeSizes { n: 4, n_i: 1, n_m: 2, n_j: 1 };
        let w = vec![0, 1, 1, 0];
        let cb = Codebook::from_words(sizes, vec![0; 4], [w.clone(), w].concat()).unwrap();
        let y = [0, 1, 1, 0];
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut first = 0;
        for _ in 0..4000 {
            let d = decode(&model, &cb, &y, 0.9, &mut rng).unwrap();
            first += usize::from(d.1 == 0);
        }
        assert!((first as f64 - 2000.0).abs() < 3.0 * 1000f64.sqrt(), "{first}");
    }

    #[test]
    fn reconstruction_of_exact_state_is_free() {
        let model = SchemeModel::new(&xor_channel(), &xor_aux()).unwrap();
        let sizes = CodeSizes { n: 4, n_i: 1, n_m: 1, n_j: 1 };
        // V = S xor B and Y = V here, so g recovers S only when B = 0.
        let s = [0, 1, 1, 0];
        let cb = Codebook::from_words(sizes, vec![0; 4], vec![0, 1, 1, 0]).unwrap();
        let (hat, d) = reconstruct(&model, &cb, Some((0, 0, 0)), &[0, 1, 1, 0], &s);
        assert_eq!(hat, s);
        assert_eq!(d, 0.0);
    }

    #[test]
    fn leakage_zero_when_eve_sees_noise() {
        let mut sc = xor_channel();
        for x in 0..2 {
            for s in 0..2 {
                for y in 0..2 {
                    let py: f64 = sc.p_yz_given_xs[x][s][y].iter().sum();
                    sc.p_yz_given_xs[x][s][y] = vec![0.5 * py, 0.5 * py];
                }
            }
        }
        let model = SchemeModel::new(&sc, &xor_aux()).unwrap();
        let sizes = CodeSizes::new(3, 0.0, 0.3, 0.3, SYMBOL_CAP).unwrap();
        let cb = gen_codebooks(&model, sizes, 1);
        assert!(estimate_leakage_exact(&model, &cb, LEAKAGE_CAP).unwrap() < 1e-12);
    }

    #[test]
    fn leakage_zero_without_message_or_sensing() {
        let mut sc = xor_channel();
        sc.alphabets.xi = 1;
        sc.p_xi_given_s = vec![vec![1.0], vec![1.0]];
        let model = SchemeModel::new(&sc, &xor_aux()).unwrap();
        let sizes = CodeSizes::new(4, 0.0, 0.0, 0.2, SYMBOL_CAP).unwrap();
        let cb = gen_codebooks(&model, sizes, 2);
        assert!(estimate_leakage_exact(&model, &cb, LEAKAGE_CAP).unwrap().abs() < 1e-12);
    }

    #[test]
    fn leakage_cap_reports_unavailable() {
        let cfg = SimConfig { n: 3, r_m: 0.3, trials: 4, leakage_cap: 10.0, ..Default::default() };
        let r = run_experiment(&xor_channel(), &xor_aux(), &cfg).unwrap();
        assert_eq!(r.leakage_method, "unavailable");
        assert!(r.leakage.is_none());
        assert!(r.leakage_note.unwrap().contains("leakage table"));
    }

    #[test]
    fn experiment_is_reproducible() {
        let cfg = SimConfig { n: 6, r_m: 0.1, r_j: 0.3, trials: 200, seed: 11, ..Default::default() };
        let a = run_experiment(&xor_channel(), &xor_aux(), &cfg).unwrap();
        let b = run_experiment(&xor_channel(), &xor_aux(), &cfg).unwrap();
        assert_eq!(a, b);
        assert!((0.0..=1.0).contains(&a.pe));
        assert!(a.pe_ci.0 <= a.pe && a.pe <= a.pe_ci.1);
        let c = run_experiment(&xor_channel(), &xor_aux(), &SimConfig { seed: 12, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rates_far_above_capacity_fail() {
        let cfg = SimConfig { n: 10, r_m: 0.5, r_j: 0.3, trials: 200, leakage: LeakageMethod::Off, ..Default::default() };
        let r = run_experiment(&xor_channel(), &xor_aux(), &cfg).unwrap();
        assert!(r.pe > 0.8, "{}", r.pe);
    }

    #[test]
    fn zero_rate_distortion_matches_single_letter() {
        // With a single codeword the encoder cannot correlate V with S, so
        // the single-letter value is only reachable when V is independent
        // of S. Here V ~ Bern(0.3) independent of S, X = V, and Y = V xor S
        // through an extra BSC(0.1).
        let mut sc = xor_channel();
        for x in 0..2 {
            for s in 0..2 {
                for y in 0..2 {
                    for z in 0..2 {
                        let pz = if z == x { 0.8 } else { 0.2 };
                        sc.p_yz_given_xs[x][s][y][z] = if y == x ^ s { 0.9 } else { 0.1 } * pz;
                    }
                }
            }
        }
        let row = vec![0.7, 0.0, 0.0, 0.3];
        let aux = AuxChannel::from_rows(1, 2, 2, &[row.clone(), row]);
        let cfg = SimConfig { n: 8, epsilon: 10.0, trials: 4000, leakage: LeakageMethod::Off, ..Default::default() };
        let r = run_experiment(&sc, &aux, &cfg).unwrap();
        assert_eq!(r.pe, 0.0);
        assert!((r.single_letter_distortion - 0.1).abs() < 1e-12);
        assert!((r.distortion - 0.1).abs() < 2.0 * r.distortion_half_width, "{r:?}");
    }

    #[test]
    fn zero_rate_cannot_cover_a_correlated_auxiliary() {
        // V depends on S but one codeword carries no choice: D is that of
        // guessing S from an independent V, not the single-letter 0.25.
        let cfg = SimConfig { n: 8, epsilon: 10.0, trials: 2000, leakage: LeakageMethod::Off, ..Default::default() };
        let r = run_experiment(&xor_channel(), &xor_aux(), &cfg).unwrap();
        assert!(r.distortion > 0.4, "{}", r.distortion);
    }
}
