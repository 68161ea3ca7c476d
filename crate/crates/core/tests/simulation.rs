use rand::Rng;
use rand_distr::StandardNormal;

use rex_core::parallel::default_workers;
use rex_core::sampling::RngStream;
use rex_core::simulation::{
    kde, run_coverage_with, run_mean_separation_with, run_trichotomy_with, CoverageConfig,
    RankSpec, TrichotomyConfig,
};
use rex_core::special::normal_pdf;

#[test]
fn kde_recovers_standard_normal_density() {
    let mut rng = RngStream::new(3, 0).rng();
    let xs: Vec<f64> = (0..100_000).map(|_| rng.sample(StandardNormal)).collect();
    let est = kde(&xs, 512).unwrap();
    let worst = est
        .grid
        .iter()
        .zip(&est.values)
        .filter(|(g, _)| g.abs() <= 2.0)
        .map(|(&g, &v)| (v - normal_pdf(g)).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.02, "{worst}");
    assert!((est.integral() - 1.0).abs() <= 0.02);
    assert!(est.values.iter().all(|&v| v >= 0.0));
    assert!(est.grid.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn kde_integrates_to_one_on_skewed_and_small_samples() {
    let mut rng = RngStream::new(4, 0).rng();
    for n in [2usize, 5, 50, 2000] {
        let xs: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().ln()).collect();
        let est = kde(&xs, 256).unwrap();
        let area = est.integral();
        assert!((0.98..=1.02).contains(&area), "n={n}: {area}");
    }
}

#[test]
fn trichotomy_low_ranks_at_desk_scale() {
    let res = run_trichotomy_with(
        &TrichotomyConfig {
            p: 3000,
            ranks: vec![RankSpec::Rank(3), RankSpec::Rank(10)],
            reps: 5000,
            n_for_means: 1,
            seed: 11,
        },
        default_workers(),
    )
    .unwrap();
    let d3 = res.get(RankSpec::Rank(3)).unwrap();
    assert!(d3.fraction_below >= 0.95, "{}", d3.fraction_below);
    let d10 = res.get(RankSpec::Rank(10)).unwrap();
    let rel = (d10.mean - 3000f64.ln().sqrt()).abs() / 3000f64.ln().sqrt();
    assert!(rel <= 0.05, "{}", d10.mean);
    for r in &res.ranks {
        let area = r.density.as_ref().unwrap().integral();
        assert!((0.98..=1.02).contains(&area));
    }
}

#[test]
fn averaging_shrinks_variance() {
    let base = TrichotomyConfig {
        p: 3000,
        ranks: vec![RankSpec::Rank(3), RankSpec::Rank(10), RankSpec::Iid],
        reps: 2000,
        n_for_means: 1,
        seed: 13,
    };
    let single = run_mean_separation_with(&base, default_workers()).unwrap();
    let averaged = run_mean_separation_with(
        &TrichotomyConfig {
            n_for_means: 30,
            ..base.clone()
        },
        default_workers(),
    )
    .unwrap();
    for (one, thirty) in single.ranks.iter().zip(&averaged.ranks) {
        assert!(thirty.variance < one.variance, "rank {}", one.rank);
    }
    // d = 3 means sit well below the threshold
    assert_eq!(averaged.get(RankSpec::Rank(3)).unwrap().above, 0);
}

#[test]
fn coverage_at_even_odds() {
    let t = run_coverage_with(
        &CoverageConfig {
            p_values: vec![3000],
            d_values: vec![8],
            alpha: 0.5,
            reps: 1000,
            seed: 17,
        },
        default_workers(),
    )
    .unwrap();
    let c = t.rows[0].coverage;
    assert!((c - 0.5).abs() <= 0.05, "{c}");
}

#[test]
fn coverage_monotone_in_level() {
    let cfg = CoverageConfig {
        p_values: vec![500, 3000],
        d_values: vec![3, 6, 10],
        alpha: 0.05,
        reps: 300,
        seed: 19,
    };
    let wide = run_coverage_with(&cfg, default_workers()).unwrap();
    let narrow = run_coverage_with(
        &CoverageConfig {
            alpha: 0.10,
            ..cfg.clone()
        },
        default_workers(),
    )
    .unwrap();
    for (w, n) in wide.rows.iter().zip(&narrow.rows) {
        assert!(w.coverage >= n.coverage, "p={} d={}", w.p, w.d);
        assert!(w.coverage_int >= n.coverage_int);
    }
}

#[test]
fn seeded_runs_repeat_exactly() {
    let cfg = TrichotomyConfig {
        p: 300,
        ranks: vec![RankSpec::Rank(5), RankSpec::Iid],
        reps: 100,
        n_for_means: 4,
        seed: 23,
    };
    let a = run_trichotomy_with(&cfg, 2).unwrap();
    let b = run_trichotomy_with(&cfg, 2).unwrap();
    assert_eq!(a, b);
    let other = run_trichotomy_with(&TrichotomyConfig { seed: 24, ..cfg }, 2).unwrap();
    assert_ne!(a.ranks[0].extremes, other.ranks[0].extremes);
}
