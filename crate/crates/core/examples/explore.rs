// Scratch exploration runs used while pinning down expected values.
use pairwalk::boundstates::catalog;
use pairwalk::spectral::{build_bloch, eigensystem, is_bound};
use pairwalk::{Parity, WalkParams};

fn main() {
    let mode = std::env::args().nth(1).unwrap_or_else(|| "catalog21".into());
    match mode.as_str() {
        "catalog21" => {
            let p = WalkParams::new(1.0, 0.0, Parity::Odd, 21).unwrap();
            let op = build_bloch(0.0, &p).unwrap();
            let states = eigensystem(&op).unwrap();
            let ring = op.ring();
            println!("all states near omega=1 or 1/3:");
            for s in &states {
                if (s.omega - 1.0).abs() < 1e-6 || (s.omega - 1.0 / 3.0).abs() < 1e-6 {
                    println!(
                        "omega={:+.12} ipr={:.4} sr={} bound={} label={}",
                        s.omega,
                        s.ipr,
                        s.support_radius,
                        is_bound(s, &ring),
                        s.exchange
                    );
                }
            }
            let recs = catalog(&p, 0.0).unwrap();
            println!("\ncatalog ({} records):", recs.len());
            for r in &recs {
                println!(
                    "omega={:+.12} mult={} ipr={:.4} sr={} label={}",
                    r.omega, r.multiplicity, r.ipr, r.support_radius, r.exchange
                );
            }
        }
        "even24" => {
            let p = WalkParams::new(1.0, 0.9, Parity::Even, 24).unwrap();
            let recs = catalog(&p, 0.0).unwrap();
            println!("catalog even n=24 ({} records):", recs.len());
            for r in &recs {
                let i0 = r.labels.iter().position(|&l| l == 0).unwrap();
                println!(
                    "omega={:+.12} mult={} ipr={:.4} sr={} label={} p(rho=0)={:.3e} (r:{:.1e} d:{:.1e} u:{:.1e} l:{:.1e})",
                    r.omega,
                    r.multiplicity,
                    r.ipr,
                    r.support_radius,
                    r.exchange,
                    r.p_rho[i0],
                    r.p_r[i0],
                    r.p_d[i0],
                    r.p_u[i0],
                    r.p_l[i0],
                );
            }
        }
        "fig4" => {
            // paper-scale catalog, odd sector lc = 191
            let p = WalkParams::new(1.0, 0.0, Parity::Odd, 191).unwrap();
            let t0 = std::time::Instant::now();
            let recs = catalog(&p, 0.0).unwrap();
            println!("odd lc=191 catalog in {:?} ({} records):", t0.elapsed(), recs.len());
            for r in &recs {
                println!(
                    "omega={:+.10} mult={} ipr={:.4} sr={:3} label={}",
                    r.omega, r.multiplicity, r.ipr, r.support_radius, r.exchange
                );
            }
            let listed = [
                -1.499f64, -1.453, -1.263, -0.8328, 0.2677, 0.2678, 0.333, 0.6546, 0.6750, 1.000,
            ];
            println!("\nFig.4 list match (tol 5e-3):");
            for target in listed {
                let best = recs
                    .iter()
                    .map(|r| (r.omega - target).abs())
                    .fold(f64::INFINITY, f64::min);
                println!("  {target:+.4}: nearest delta {best:.2e}");
            }
        }
        "fig4even" => {
            let p = WalkParams::new(1.0, std::f64::consts::FRAC_PI_2, Parity::Even, 95).unwrap();
            let recs = catalog(&p, 0.0).unwrap();
            println!("even lc=190 catalog ({} records):", recs.len());
            for r in &recs {
                println!(
                    "omega={:+.10} mult={} ipr={:.4} sr={:3} label={}",
                    r.omega, r.multiplicity, r.ipr, r.support_radius, r.exchange
                );
            }
        }
        "ksplit" => {
            // labels of the omega ~ phi family as k moves off zero
            let p = WalkParams::new(1.0, 0.0, Parity::Odd, 41).unwrap();
            for k in [0.0, 0.02, 0.1, 0.3] {
                let op = build_bloch(k, &p).unwrap();
                let states = eigensystem(&op).unwrap();
                print!("k={k:+.3}: ");
                for s in states.iter().filter(|s| (s.omega - 1.0).abs() < 0.2) {
                    print!(
                        "(w={:+.6} {} sr={}) ",
                        s.omega, s.exchange, s.support_radius
                    );
                }
                println!();
            }
        }
        "fig5" => {
            use pairwalk::boundstates::{build_near_dimer, state_rho_profile, NearDimerBranch};
            use pairwalk::coin::CoinVector;
            use pairwalk::evolution::{evolve, EvolveOptions, InitialStateSpec};
            use pairwalk::C64;
            let p = WalkParams::new(1.0, 0.0, Parity::Odd, 191).unwrap();
            let ring = p.ring();
            let plus = build_near_dimer(NearDimerBranch::PlusOne, 1.0, &p).unwrap();
            let minus = build_near_dimer(NearDimerBranch::MinusOne, 1.0, &p).unwrap();
            let combine = |sign: f64| -> Vec<(i64, CoinVector)> {
                let mut v = state_rho_profile(&ring, &plus);
                for (rho, cv) in state_rho_profile(&ring, &minus) {
                    v.push((rho, cv.scale(sign)));
                }
                v
            };
            for (name, profile) in [
                ("fermion (dimer+ - dimer-)", combine(-1.0)),
                ("boson   (dimer+ + dimer-)", combine(1.0)),
                (
                    "boson (iii) d/u",
                    state_rho_profile(
                        &ring,
                        &build_near_dimer(NearDimerBranch::Symmetric, 1.0, &p).unwrap(),
                    ),
                ),
                (
                    "caption coin at rho=+1",
                    vec![(
                        1i64,
                        CoinVector::new(
                            C64::new(0.0, 0.0),
                            C64::new(0.0, 0.0),
                            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                            C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                        ),
                    )],
                ),
            ] {
                let spec = InitialStateSpec::SigmaSegment {
                    rho_profile: profile,
                    sigma_lo: -13,
                    sigma_hi: 13,
                };
                let opts = EvolveOptions {
                    stride: 10,
                    marginal_times: vec![0, 50, 100],
                    ..Default::default()
                };
                let series = evolve(&spec, &p, 100, &opts).unwrap();
                let last = series.last();
                let p_rho = last.p_rho.as_ref().unwrap();
                let p_sigma = last.p_sigma.as_ref().unwrap();
                let on_pm1: f64 =
                    p_rho.probability_at(1) + p_rho.probability_at(-1);
                // peak structure of P_sigma
                let peaks: Vec<(i64, f64)> = {
                    let v = &p_sigma.values;
                    (1..v.len() - 1)
                        .filter(|&i| v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] > 2e-3)
                        .map(|i| (p_sigma.coordinate(i), v[i]))
                        .collect()
                };
                let mid50 = series.record_at(50).unwrap();
                println!(
                    "{name}: t=100 P(|rho|=1)={on_pm1:.4} <sigma>={:+.4} var_sigma={:.1} \
                     (t=50 var={:.1}) peaks={peaks:?}",
                    last.mean_sigma, last.var_sigma, mid50.var_sigma
                );
            }
        }
        "figs67" => {
            use pairwalk::coin::CoinVector;
            use pairwalk::evolution::{evolve, EvolveOptions, InitialStateSpec};
            use pairwalk::C64;
            let half = 0.5;
            let coin = CoinVector::new(
                C64::new(half, 0.0),
                C64::new(0.0, half),
                C64::new(0.0, -half),
                C64::new(half, 0.0),
            );
            for phi in [std::f64::consts::PI, -std::f64::consts::PI] {
                let p = WalkParams::new(phi, 0.0, Parity::Even, 95).unwrap();
                let spec = InitialStateSpec::GaussianPair {
                    center1: 60.0,
                    center2: -60.0,
                    width: 5.0,
                    kx: std::f64::consts::FRAC_PI_2,
                    ky: std::f64::consts::FRAC_PI_2,
                    coin,
                };
                let opts = EvolveOptions {
                    stride: 10,
                    joint_times: vec![],
                    ..Default::default()
                };
                let t0 = std::time::Instant::now();
                let series = evolve(&spec, &p, 150, &opts).unwrap();
                println!("phi={phi:+.4} ({:?}):", t0.elapsed());
                for r in &series.records {
                    // probability near the diagonal rho = 0
                    let near_diag = r.p_rho.as_ref().map(|m| {
                        m.iter()
                            .filter(|(rho, _)| rho.abs() <= 2)
                            .map(|(_, p)| p)
                            .sum::<f64>()
                    });
                    println!(
                        "  t={:3} <rho>-rho0={:+.5} var_rho={:.2} norm-1={:+.2e} {:?}",
                        r.t,
                        r.mean_rho - 120.0,
                        r.var_rho,
                        r.norm - 1.0,
                        near_diag
                    );
                }
            }
        }
        "kbound" => {
            let p = WalkParams::new(1.0, 0.0, Parity::Odd, 95).unwrap();
            for j in 0..8 {
                let k = -1.5 + j as f64 * (3.0 / 7.0);
                let op = build_bloch(k, &p).unwrap();
                let states = eigensystem(&op).unwrap();
                let tight = states.iter().filter(|s| s.support_radius <= 3).count();
                let bound = states.iter().filter(|s| is_bound(s, &op.ring())).count();
                println!("k={k:+.3}: tight(sr<=3)={tight} bound={bound}");
            }
        }
        "force" => {
            use pairwalk::coin::CoinVector;
            use pairwalk::evolution::{evolve, EvolveOptions, InitialStateSpec};
            use pairwalk::C64;
            let s = std::f64::consts::FRAC_1_SQRT_2;
            // per-walker coins: (1, i)/sqrt2 and (1, -i)/sqrt2
            let plus_i = [C64::new(s, 0.0), C64::new(0.0, s)];
            let minus_i = [C64::new(s, 0.0), C64::new(0.0, -s)];
            let tensor = |c1: [C64; 2], c2: [C64; 2]| {
                CoinVector::new(c1[0] * c2[0], c1[0] * c2[1], c1[1] * c2[0], c1[1] * c2[1])
            };
            for (name, coin) in [
                ("(1,+i)x(1,+i)", tensor(plus_i, plus_i)),
                ("(1,-i)x(1,-i)", tensor(minus_i, minus_i)),
                ("(1,-i)x(1,+i)", tensor(minus_i, plus_i)),
            ] {
                for phi in [std::f64::consts::PI, -std::f64::consts::PI] {
                    let p = WalkParams::new(phi, 0.0, Parity::Even, 95).unwrap();
                    let spec = InitialStateSpec::GaussianPair {
                        center1: 60.0,
                        center2: -60.0,
                        width: 5.0,
                        kx: std::f64::consts::FRAC_PI_2,
                        ky: std::f64::consts::FRAC_PI_2,
                        coin,
                    };
                    let opts = EvolveOptions {
                        stride: 50,
                        ..Default::default()
                    };
                    let series = evolve(&spec, &p, 150, &opts).unwrap();
                    print!("{name} phi={phi:+.3}: ");
                    for r in &series.records {
                        print!(
                            "t={} drho={:+.4} dsig={:+.4} | ",
                            r.t,
                            r.mean_rho - 120.0,
                            r.mean_sigma
                        );
                    }
                    println!();
                }
            }
        }
        other => eprintln!("unknown mode {other}"),
    }
}
