//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when a criterion fails that is not listed in `KNOWN_RED`.
//!
//! Criterion 1 asks for an edge-length system of rank 3 on the square
//! fixture. That system has full rank 4 there, so the criterion is reported
//! as failing while its other clauses are still checked.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::Matrix2;
use packrigid::body::{bump_profile, ConvexBody, Vec2};
use packrigid::harness::{
    densify_independent, run_control_campaign, run_theorem_trials, sample_body,
    square_counterexample, trial_rng, BodyFamily, DensifyConfig, TrialConfig,
};
use packrigid::packer::{body_pack, circle_pack, ContinuationConfig, PinnedTriangle};
use packrigid::rigidity::{
    assemble_length_matrix, assemble_rigidity_matrix, equilibrium_stress, rank_report,
    TolerancePolicy,
};
use packrigid::sparsity::{
    pebble_sparse, random_sparse_spanning_subgraph, random_triangulation, ContactGraph,
    SparsityVerdict, Triangulation,
};
use rand::Rng;

const SEED: u64 = 20240611;

/// Criteria expected to fail, with the reason.
const KNOWN_RED: &[(usize, &str)] = &[(
    1,
    "the edge-length system of the square fixture has rank 4, not 3",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

type Check = fn() -> Result<Outcome, Box<dyn std::error::Error>>;

fn main() {
    let criteria: [(usize, &str, Duration, Check); 9] = [
        (
            1,
            "square counterexample stress",
            Duration::from_secs(1),
            square_stress,
        ),
        (
            2,
            "Descartes inner radius",
            Duration::from_secs(1),
            descartes,
        ),
        (
            3,
            "duality-map identities",
            Duration::from_secs(30),
            duality_identities,
        ),
        (
            4,
            "randomized sparsity and independence campaign",
            Duration::from_secs(600),
            campaign,
        ),
        (
            5,
            "Euclidean control",
            Duration::from_secs(30),
            euclidean_control,
        ),
        (
            6,
            "pebble game against exhaustive enumeration",
            Duration::from_secs(120),
            pebble_oracle,
        ),
        (7, "bump surgery", Duration::from_secs(10), bump_surgery),
        (8, "densification", Duration::from_secs(300), densification),
        (
            9,
            "determinism of body_pack",
            Duration::from_secs(30),
            determinism,
        ),
    ];
    let mut unexpected = Vec::new();
    for (number, name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && elapsed < budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "criterion {number} ({name}): {} [{:.2}s of {}s] {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !pass {
            match KNOWN_RED.iter().find(|(n, _)| *n == number) {
                Some((_, reason)) => println!("  known red: {reason}"),
                None => unexpected.push(number),
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

fn square_stress() -> Result<Outcome, Box<dyn std::error::Error>> {
    let packing = square_counterexample(2.0)?;
    let stress = equilibrium_stress(&packing)?.ok_or("no equilibrium stress")?;
    let expected = [1.0, 1.0, -1.0, -1.0];
    let error = stress
        .iter()
        .zip(expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let rigidity = assemble_rigidity_matrix(&packing.body, &packing.graph, &packing.p)?;
    let rigidity_rank = rank_report(&rigidity, TolerancePolicy::Default).rank;
    let length_rank = rank_report(
        &assemble_length_matrix(&packing)?.matrix,
        TolerancePolicy::Default,
    )
    .rank;
    let recovered = error <= 1e-8 && rigidity_rank == 3;
    if !recovered {
        return Ok(outcome(
            false,
            format!("stress {stress:?} (error {error:.1e}), rigidity rank {rigidity_rank}"),
        ));
    }
    Ok(outcome(
        length_rank == 3,
        format!(
            "stress {stress:?} within {error:.1e}, rigidity matrix rank {rigidity_rank}, edge-length system rank {length_rank} (required 3)"
        ),
    ))
}

fn descartes() -> Result<Outcome, Box<dyn std::error::Error>> {
    let k4 = Triangulation::from_graph(ContactGraph::complete(4), Some([0, 1, 2]))?;
    let packing = circle_pack(&k4, &PinnedTriangle::standard(k4.outer))?.packing;
    let expected = 1.0 / (3.0 + 2.0 * 3f64.sqrt());
    let error = (packing.r[3] - expected).abs();
    Ok(outcome(
        error <= 1e-8,
        format!("inner radius {:.15}, error {error:.1e}", packing.r[3]),
    ))
}

fn duality_identities() -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut rng = trial_rng(SEED, 3);
    let mut bodies = vec![
        ("disc", ConvexBody::disc()),
        (
            "ellipse",
            ConvexBody::ellipse(Matrix2::new(2.0, 0.7, -0.3, 0.8))?,
        ),
    ];
    for family in [
        BodyFamily::Pnorm,
        BodyFamily::Expfamily,
        BodyFamily::Profile,
    ] {
        let name = match family {
            BodyFamily::Pnorm => "p-norm",
            BodyFamily::Expfamily => "exp-family",
            BodyFamily::Profile => "profile",
        };
        bodies.push((name, sample_body(family, &mut rng)?));
    }
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut pass = true;
    for (_, body) in &bodies {
        for _ in 0..1000 {
            let x = Vec2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let phi = body.duality_map(&x)?;
            let norm = body.norm(&x)?;
            let pairing = (phi.dot(&x) - norm * norm).abs() / (1.0 + x.norm_squared());
            let lambda = rng.gen_range(0.01..100.0);
            let scaled = body.duality_map(&(x * lambda))?;
            let homogeneity = (scaled - phi * lambda).norm() / (1.0 + scaled.norm());
            let h = 1e-6 * (1.0 + x.norm());
            let half = |y: Vec2| body.norm(&y).map(|n| 0.5 * n * n);
            let fd = Vec2::new(
                (half(x + Vec2::new(h, 0.0))? - half(x - Vec2::new(h, 0.0))?) / (2.0 * h),
                (half(x + Vec2::new(0.0, h))? - half(x - Vec2::new(0.0, h))?) / (2.0 * h),
            );
            let gradient = (fd - phi).norm() / (1.0 + phi.norm());
            pass &= pairing <= 1e-8 && homogeneity <= 1e-10 && gradient <= 1e-5;
            worst = (
                worst.0.max(pairing),
                worst.1.max(homogeneity),
                worst.2.max(gradient),
            );
        }
    }
    let names: Vec<&str> = bodies.iter().map(|(n, _)| *n).collect();
    Ok(outcome(
        pass,
        format!(
            "{names:?}: worst pairing {:.1e}, homogeneity {:.1e}, gradient {:.1e}",
            worst.0, worst.1, worst.2
        ),
    ))
}

fn campaign() -> Result<Outcome, Box<dyn std::error::Error>> {
    let cfg = TrialConfig {
        seed: SEED,
        ..TrialConfig::default()
    };
    let report = run_theorem_trials(&cfg)?;
    let s = &report.summary;
    let pass = s.decisive > 0
        && s.all_sparse_and_planar()
        && s.all_independent()
        && s.tight_kernels_are_two()
        && s.ambiguous_rate() < 0.05;
    Ok(outcome(
        pass,
        format!(
            "{} trials, {} complete, {} decisive, sparse {}, non-crossing {}, independent {}, tight {} with kernel 2 in {}, ambiguous {:.1}%",
            s.trials,
            s.complete,
            s.decisive,
            s.sparse,
            s.noncrossing,
            s.independent,
            s.tight,
            s.tight_kernel_two,
            100.0 * s.ambiguous_rate()
        ),
    ))
}

fn euclidean_control() -> Result<Outcome, Box<dyn std::error::Error>> {
    let records = run_control_campaign(SEED, 10)?;
    let dependent = records.iter().filter(|r| r.kind == "dependent").count();
    let laman_three = records
        .iter()
        .filter(|r| r.kind == "laman" && r.kernel_dim == 3 && r.rank == r.edges)
        .count();
    let laman = records.iter().filter(|r| r.kind == "laman").count();
    let ok = records.iter().filter(|r| r.as_expected).count();
    Ok(outcome(
        ok == records.len() && laman_three == laman && laman > 0 && dependent > 0,
        format!(
            "{ok}/{} as expected; {dependent} (2,2)-tight non-(2,3)-sparse cases, {laman_three}/{laman} (2,3)-tight with kernel 3",
            records.len()
        ),
    ))
}

/// Sparsity by checking every vertex subset.
fn exhaustive_verdict(n: usize, adjacency: &[u32], edges: usize, k: usize) -> SparsityVerdict {
    for subset in 1u32..(1 << n) {
        let size = subset.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let twice: u32 = (0..n)
            .filter(|v| subset & (1 << v) != 0)
            .map(|v| (adjacency[v] & subset).count_ones())
            .sum();
        if (twice / 2) as usize + k > 2 * size {
            return SparsityVerdict::Violating;
        }
    }
    if edges + k == 2 * n {
        SparsityVerdict::Tight
    } else {
        SparsityVerdict::Sparse
    }
}

fn connected(n: usize, adjacency: &[u32]) -> bool {
    let mut seen = 1u32;
    let mut frontier = 1u32;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = adjacency[v] & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == (1 << n) - 1
}

/// Every connected graph on up to 7 vertices, up to relabelling: only
/// labellings with non-increasing degrees are visited, and every graph has
/// one.
fn pebble_oracle() -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut graphs = 0usize;
    let mut mismatches = Vec::new();
    for n in 1..=7usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let mut adjacency = vec![0u32; n];
            for (i, &(u, v)) in pairs.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    adjacency[u] |= 1 << v;
                    adjacency[v] |= 1 << u;
                }
            }
            let degrees: Vec<u32> = adjacency.iter().map(|a| a.count_ones()).collect();
            if degrees.windows(2).any(|w| w[0] < w[1]) || !connected(n, &adjacency) {
                continue;
            }
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| *e)
                .collect();
            let graph = ContactGraph::new(n, edges.iter().copied())?;
            graphs += 1;
            for k in [2, 3] {
                let cert = pebble_sparse(&graph, k);
                let expected = exhaustive_verdict(n, &adjacency, edges.len(), k);
                let witness_ok = match &cert.witness {
                    Some(w) => cert.witness_edges + k > 2 * w.len(),
                    None => true,
                };
                if cert.verdict != expected || !witness_ok {
                    mismatches.push((n, mask, k));
                }
            }
        }
    }
    Ok(outcome(
        mismatches.is_empty(),
        format!(
            "{graphs} graphs, k = 2 and 3, mismatches {:?}",
            &mismatches[..mismatches.len().min(5)]
        ),
    ))
}

fn bump_surgery() -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut rng = trial_rng(SEED, 7);
    let mut worst = (0.0f64, 0.0f64, f64::INFINITY);
    let mut exact = true;
    for _ in 0..20 {
        let body = sample_body(BodyFamily::Profile, &mut rng)?;
        let f = body.profile().ok_or("profile body expected")?.clone();
        let c = rng.gen_range(0.0..PI);
        let width = rng.gen_range(0.1..0.6);
        let x1 = c - width * rng.gen_range(0.2..0.8);
        let x2 = x1 + width;
        let mut a = rng.gen_range(-0.2..0.2);
        let g = loop {
            match bump_profile(&f, x1, x2, c, a) {
                Ok(g) => break g,
                Err(_) if a.abs() > 1e-6 => a *= 0.5,
                Err(e) => return Err(e.into()),
            }
        };
        let (fc, gc) = (f.jet(c)?, g.jet(c)?);
        exact &= gc.f == fc.f;
        worst.0 = worst.0.max((gc.df - fc.df - a).abs());
        for x in [x1, x2] {
            let (fx, gx) = (f.jet(x)?, g.jet(x)?);
            worst.1 = worst.1.max(
                (gx.f - fx.f)
                    .abs()
                    .max((gx.df - fx.df).abs())
                    .max((gx.ddf - fx.ddf).abs()),
            );
        }
        worst.2 = worst.2.min(g.min_curvature()?.0);
    }
    Ok(outcome(
        exact && worst.0 <= 1e-9 && worst.1 <= 1e-9 && worst.2 > 0.0,
        format!(
            "g(c) = f(c) exactly: {exact}, slope error {:.1e}, endpoint C² error {:.1e}, min curvature {:.3}",
            worst.0, worst.1, worst.2
        ),
    ))
}

fn densification() -> Result<Outcome, Box<dyn std::error::Error>> {
    let cfg = DensifyConfig::default();
    let mut successes = 0;
    let mut notes = Vec::new();
    for index in 0..10u64 {
        let mut rng = trial_rng(SEED, 1000 + index);
        let n = rng.gen_range(4..=10);
        let tri = random_triangulation(n, &mut rng)?;
        let target = rng.gen_range(n..=2 * n - 2);
        let keep = random_sparse_spanning_subgraph(&tri.graph, 2, target, &mut rng)?;
        let graph = tri.graph.edge_subgraph(&keep);
        let body = sample_body(BodyFamily::Expfamily, &mut rng)?;
        match densify_independent(&body, &graph, index, &cfg) {
            Ok(out) if out.is_independent() && out.radial_distance <= cfg.eps => successes += 1,
            Ok(out) => notes.push(format!(
                "#{index}: rank {}/{}",
                out.rank,
                graph.edge_count()
            )),
            Err(e) => notes.push(format!("#{index}: {e}")),
        }
    }
    Ok(outcome(
        successes >= 9,
        format!(
            "{successes}/10 independent within eps {}; {notes:?}",
            cfg.eps
        ),
    ))
}

fn determinism() -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut rng = trial_rng(SEED, 9);
    let mut worst = 0.0f64;
    for family in [BodyFamily::Expfamily, BodyFamily::Pnorm] {
        let body = sample_body(family, &mut rng)?;
        let tri = random_triangulation(10, &mut rng)?;
        let pins = PinnedTriangle::standard(tri.outer);
        let cfg = ContinuationConfig::default();
        let a = body_pack(&body, &tri, &pins, &cfg)?.packing;
        let b = body_pack(&body, &tri, &pins, &cfg)?.packing;
        for v in 0..a.vertex_count() {
            worst = worst
                .max((a.p[v] - b.p[v]).amax())
                .max((a.r[v] - b.r[v]).abs());
        }
    }
    Ok(outcome(
        worst <= 1e-9,
        format!("largest componentwise difference {worst:.1e}"),
    ))
}
