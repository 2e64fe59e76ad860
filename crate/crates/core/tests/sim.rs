use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secure_isac::dmc::{AuxChannel, DmcScenario, Estimator};
use secure_isac::files::{parse_experiment, read_text};
use secure_isac::sim::{
    gen_codebooks, likelihood_encode, run_with_model, transmit, CodeSizes, Codebook, SchemeModel, SimConfig,
    SYMBOL_CAP,
};

fn reference() -> (DmcScenario, AuxChannel, SimConfig) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/reference_experiment.json");
    let e = parse_experiment(&read_text(&path).unwrap(), "reference").unwrap();
    (e.scenario, e.aux, e.config)
}

#[test]
fn channel_outputs_follow_the_product_law() {
    let (sc, aux, _) = reference();
    let model = SchemeModel::new(&sc, &aux).unwrap();
    let n = 40_000;
    let sizes = CodeSizes::new(n, 0.0, 0.0, 0.0, usize::MAX).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (v, s) in [(0usize, 0usize), (1, 0), (1, 1)] {
        let cb = Codebook::from_words(sizes, vec![0; n], vec![v as u16; n]).unwrap();
        let out = transmit(&model, &cb, (0, 0, 0), &vec![s; n], &mut rng);
        // P(y, z | u, v, s) straight from the tables
        let px: Vec<f64> = aux.p_uvx_given_s[s][0][v].clone();
        let tot: f64 = px.iter().sum();
        for y in 0..2 {
            for z in 0..2 {
                let p: f64 = (0..2).map(|x| px[x] / tot * sc.p_yz_given_xs[x][s][y][z]).sum();
                let k = out.y.iter().zip(&out.z).filter(|&(&a, &b)| a == y && b == z).count();
                let sd = (p * (1.0 - p) / n as f64).sqrt();
                assert!((k as f64 / n as f64 - p).abs() <= 4.0 * sd + 1e-12, "v={v} s={s} y={y} z={z}");
            }
        }
    }
}

#[test]
fn encoder_output_approaches_the_design_law() {
    // V = S xor B with P(B = 1) = 1/4; soft covering should pull the
    // agreement frequency of (v_t, s_t) towards 3/4 as n grows.
    let (sc, aux, _) = reference();
    let model = SchemeModel::new(&sc, &aux).unwrap();
    let gap = |n: usize| {
        let sizes = CodeSizes::new(n, 0.0, 0.0, 0.45, SYMBOL_CAP).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let (mut agree, mut total) = (0usize, 0usize);
        for trial in 0..3000u64 {
            let cb = gen_codebooks(&model, sizes, 1000 + trial);
            let s = model.draw_state(n, &mut rng);
            let (i, j) = likelihood_encode(&model, &cb, 0, &s, &mut rng).unwrap();
            let v = cb.v(i, 0, j);
            agree += s.iter().zip(v).filter(|&(&a, &b)| a == b as usize).count();
            total += n;
        }
        (agree as f64 / total as f64 - 0.75).abs()
    };
    let (g2, g12) = (gap(2), gap(12));
    assert!(g12 < g2, "{g12} vs {g2}");
    assert!(g12 < 0.05, "{g12}");
}

#[test]
fn posterior_estimator_beats_constant_guess() {
    let (sc, aux, cfg) = reference();
    let model = SchemeModel::new(&sc, &aux).unwrap();
    let mut flat = model.clone();
    flat.g = Estimator::constant(model.g.dims, 0);
    flat.g_y = vec![0; model.ny];
    let cfg = SimConfig { n: 8, trials: 1000, ..cfg };
    let a = run_with_model(&model, &cfg).unwrap();
    let b = run_with_model(&flat, &cfg).unwrap();
    // reconstruction draws no randomness, so both runs share every trial
    assert_eq!(a.pe, b.pe);
    assert!(a.distortion + a.distortion_half_width < b.distortion - b.distortion_half_width);
    assert!((b.distortion - 0.5).abs() < 0.05);
}
