use lrp_core::ballgrowth::{init_ball, run_chain, Driver, StopReason, StopRule};
use lrp_core::estimators::{bfs_distances, diameter_exact, UNREACHED};
use lrp_core::experiment::{
    run_ball_growth, run_diameter, run_scaling, run_two_ball, ExperimentConfig,
};
use lrp_core::graph::sample_graph_eager;
use lrp_core::io::{read_graph, write_graph};
use lrp_core::weights::expected_boundary_growth;
use lrp_core::{BoxSpec, Mode, ModelParams};

#[test]
fn quenched_layers_match_bfs_histogram() {
    let spec = BoxSpec::new(2, 20).unwrap();
    let p = ModelParams::critical(0.7, 2).unwrap();
    let g = sample_graph_eager(&spec, &p, 11);
    let x = spec.site(&[3, 17]).unwrap();
    let dist = bfs_distances(&g, &x).unwrap();
    let ecc = *dist.dist().iter().max().unwrap();
    assert_ne!(ecc, UNREACHED);
    let mut hist = vec![0u64; ecc as usize + 1];
    for &d in dist.dist() {
        hist[d as usize] += 1;
    }
    let traj = run_chain(
        init_ball(&spec, &[x.index()]).unwrap(),
        &mut Driver::quenched(&g),
        StopRule::default(),
    )
    .unwrap();
    assert_eq!(traj.boundary_sizes, hist);
    assert_eq!(traj.stop_reason, StopReason::Covered);
    assert_eq!(traj.covered_step, Some(ecc as usize));
}

#[test]
fn graph_file_round_trip_preserves_distances() {
    let spec = BoxSpec::new(2, 15).unwrap();
    let p = ModelParams::critical(1.0, 2).unwrap();
    let g = sample_graph_eager(&spec, &p, 4);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.lrpg");
    write_graph(&g, std::fs::File::create(&path).unwrap()).unwrap();
    let back = read_graph(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back.edges(), g.edges());
    assert_eq!(back.seed(), g.seed());
    assert_eq!(back.generator_id(), g.generator_id());
    assert_eq!(
        diameter_exact(&back, 1000).unwrap(),
        diameter_exact(&g, 1000).unwrap()
    );
}

#[test]
fn first_growth_mean_matches_pairwise_oracle_in_two_dimensions() {
    let spec = BoxSpec::new(2, 9).unwrap();
    let beta = 0.8;
    let p = ModelParams::critical(beta, 2).unwrap();
    let start = [
        spec.site_index(&[4, 4]).unwrap(),
        spec.site_index(&[1, 7]).unwrap(),
    ];
    let exact = expected_boundary_growth(&p, &spec, &init_ball(&spec, &start).unwrap());
    let mut oracle = 0.0;
    for y in 0..spec.site_count() {
        if start.contains(&y) {
            continue;
        }
        let yc = spec.site_from_index(y).unwrap();
        let mut miss = 1.0;
        for &x in &start {
            let xc = spec.site_from_index(x).unwrap();
            let r: u64 = xc
                .coords()
                .iter()
                .zip(yc.coords())
                .map(|(a, b)| a.abs_diff(*b))
                .sum();
            miss *= if r == 1 {
                0.0
            } else {
                (-beta / (r * r) as f64).exp()
            };
        }
        oracle += 1.0 - miss;
    }
    assert!((exact - oracle).abs() < 1e-10, "{exact} vs {oracle}");
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn runners_ignore_thread_count() {
    let c = ExperimentConfig {
        n: 128,
        trials: 24,
        seed: 99,
        n_grid: vec![16, 32],
        ..Default::default()
    };
    let q = ExperimentConfig {
        mode: Mode::Quenched,
        ..c.clone()
    };
    let run = || {
        (
            run_ball_growth(&c).unwrap(),
            run_ball_growth(&q).unwrap(),
            run_two_ball(&c).unwrap(),
            run_two_ball(&q).unwrap(),
            run_diameter(&q).unwrap(),
            run_scaling(&c).unwrap().0,
        )
    };
    let one = in_pool(1, run);
    let four = in_pool(4, run);
    assert_eq!(one.0, four.0);
    assert_eq!(one.1, four.1);
    assert_eq!(one.2, four.2);
    assert_eq!(one.3, four.3);
    assert_eq!(one.4, four.4);
    assert_eq!(one.5, four.5);
}

#[test]
fn master_seed_changes_records() {
    let c = ExperimentConfig {
        n: 64,
        trials: 4,
        ..Default::default()
    };
    let d = ExperimentConfig {
        seed: 1,
        ..c.clone()
    };
    let a = run_ball_growth(&c).unwrap().0;
    let b = run_ball_growth(&d).unwrap().0;
    assert!(a.iter().zip(&b).all(|(x, y)| x.seed != y.seed));
    assert_ne!(a[0].config_hash, b[0].config_hash);
}
