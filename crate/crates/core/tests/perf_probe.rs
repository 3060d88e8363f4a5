//! Ignored timing probes for the heavy paths; run explicitly with
//! `cargo test -p hypertree-core --test perf_probe -- --ignored --nocapture`.

use std::time::Instant;

use hypertree_core::census::{run_census, CensusOptions};
use hypertree_core::certificates::{hyperbolicity_certificate_with, ScanLimits};
use hypertree_core::homology::h1;
use hypertree_core::kernel::{build_kernel, KernelBackend};
use hypertree_core::mh::MhChain;
use hypertree_core::rng::seeded;
use hypertree_core::sampler::sample_dpp;

#[test]
#[ignore]
fn probe_census_n6() {
    let t0 = Instant::now();
    let result = run_census(6, &CensusOptions::default()).unwrap();
    println!(
        "census n=6 single-thread: {:?} (N = {})",
        t0.elapsed(),
        result.total
    );
    let t0 = Instant::now();
    let result = run_census(
        6,
        &CensusOptions {
            allow_seven: false,
            threads: 8,
        },
    )
    .unwrap();
    println!("census n=6 8 threads: {:?} (N = {})", t0.elapsed(), result.total);
}

#[test]
#[ignore]
fn probe_dpp_rational_n6() {
    let kernel = build_kernel(6, KernelBackend::Rational).unwrap();
    let mut rng = seeded(1);
    let t0 = Instant::now();
    let reps = 2000;
    for _ in 0..reps {
        sample_dpp(&kernel, &mut rng).unwrap();
    }
    let dt = t0.elapsed();
    println!(
        "rational DPP n=6: {:?} total, {:.3} ms/sample -> {:.0} s for 1e5",
        dt,
        dt.as_secs_f64() * 1e3 / reps as f64,
        dt.as_secs_f64() / reps as f64 * 1e5
    );
}

#[test]
#[ignore]
fn probe_mh_n6() {
    let mut chain = MhChain::new(6, 2, None).unwrap();
    let t0 = Instant::now();
    chain.run(100_000);
    let dt = t0.elapsed();
    println!(
        "MH n=6: {:?} per 1e5 steps -> {:.0} s for 1e6",
        dt,
        dt.as_secs_f64() * 10.0
    );
}

#[test]
#[ignore]
fn probe_n30_pipeline() {
    let kernel = build_kernel(30, KernelBackend::Float).unwrap();
    let mut rng = seeded(3);
    let t0 = Instant::now();
    let c = sample_dpp(&kernel, &mut rng).unwrap();
    println!("float DPP n=30 sample: {:?}", t0.elapsed());

    let t0 = Instant::now();
    let report = hyperbolicity_certificate_with(
        &c,
        12,
        &ScanLimits {
            node_budget: u64::MAX,
            threads: 1,
        },
    )
    .unwrap();
    println!(
        "scan n=30 C'=12: {:?} (visited {}, ratio {:.3}, pass {:?})",
        t0.elapsed(),
        report.subsets_visited,
        report.ratio,
        report.pass
    );

    let t0 = Instant::now();
    let hom = h1(&c);
    println!(
        "h1 n=30: {:?} (order bits {})",
        t0.elapsed(),
        hom.torsion.order().bits()
    );
}

#[test]
#[ignore]
fn probe_h1_mid_n() {
    for n in [10u32, 15, 20, 25] {
        let kernel = build_kernel(n, KernelBackend::Float).unwrap();
        let mut rng = seeded(4);
        let c = sample_dpp(&kernel, &mut rng).unwrap();
        let t0 = Instant::now();
        let hom = h1(&c);
        println!(
            "h1 n={n}: {:?} (order {})",
            t0.elapsed(),
            hom.torsion.order()
        );
    }
}
