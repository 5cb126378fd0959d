//! Command-line interface. Every subcommand prints its findings and
//! reports whether all of its checks passed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::densify::{densify_independent, DensifyConfig};
use super::fixtures::square_counterexample;
use super::io::{self, write_text};
use super::render::write_svg;
use super::trials::{env_seed, run_control_campaign, run_theorem_trials, TrialConfig};
use super::HarnessError;
use crate::packer::{body_pack, subgraph_flow, ContinuationConfig, PinnedTriangle};
use crate::rigidity::{
    edge_length_stress, equilibrium_stress, independence_report, index_bound_check,
    infinitesimal_rigidity_test, radii_projection_check, Packing, TolerancePolicy,
    FEASIBILITY_TOLERANCE,
};
use crate::sparsity::{pebble_sparse, Triangulation};

#[derive(Debug, Parser)]
#[command(
    name = "packrigid",
    version,
    about = "Packings of convex bodies and their rigidity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pack a triangulation with a body.
    Pack(PackArgs),
    /// Open contacts of a packing down to a spanning subgraph.
    Open(OpenArgs),
    /// Report feasibility, sparsity, independence and rigidity.
    Analyze(AnalyzeArgs),
    /// Report equilibrium stresses and vertex indices.
    Stress(StressArgs),
    /// Run a randomized campaign.
    Trials(TrialsArgs),
    /// Reshape a body so a packing of a sparse graph becomes independent.
    Densify(DensifyArgs),
    /// Draw a packing as SVG.
    Render(RenderArgs),
    /// Write the square-body packing carrying a stress.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Args)]
pub struct PackArgs {
    /// Edge list of a triangulation.
    #[arg(long)]
    pub graph: PathBuf,
    /// Body descriptor (JSON).
    #[arg(long)]
    pub body: PathBuf,
    /// "a b c x1 y1 x2 y2 x3 y3"; defaults to the graph's outer face on
    /// the standard triangle.
    #[arg(long)]
    pub pin: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OpenArgs {
    /// Packing of a triangulation.
    #[arg(long)]
    pub packing: PathBuf,
    /// Edge list of the spanning subgraph to keep.
    #[arg(long)]
    pub keep_edges: PathBuf,
    /// Three mutually adjacent vertices held in place; defaults to the
    /// first triangle of the graph.
    #[arg(long)]
    pub pin_vertices: Option<String>,
    /// Relative flow time; opened gaps grow to about half of it times the
    /// sum of the radii.
    #[arg(long, default_value_t = 0.1)]
    pub flow_time: f64,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub packing: PathBuf,
    /// Fail unless the packing is independent.
    #[arg(long)]
    pub expect_independent: bool,
    /// Fail unless the contact graph is (2,2)-sparse.
    #[arg(long)]
    pub expect_sparse: bool,
    /// Write the analysis as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StressArgs {
    #[arg(long)]
    pub packing: PathBuf,
    /// Fail unless an equilibrium stress exists.
    #[arg(long)]
    pub expect_stress: bool,
}

#[derive(Debug, Args)]
pub struct TrialsArgs {
    /// Campaign settings (TOML key = value lines); defaults when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary table.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Also run this many Euclidean control trials.
    #[arg(long, default_value_t = 0)]
    pub control: usize,
}

#[derive(Debug, Args)]
pub struct DensifyArgs {
    /// Edge list of a planar (2,2)-sparse connected graph.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub body: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-2)]
    pub eps: f64,
    #[arg(long)]
    pub out_body: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub packing: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 2.0)]
    pub t: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

fn check(name: &str, ok: bool) -> bool {
    println!("check {name}: {}", if ok { "ok" } else { "FAILED" });
    ok
}

fn feasible(packing: &Packing) -> Result<bool, HarnessError> {
    let f = packing.feasibility()?;
    println!(
        "max contact residual {:.3e}, min non-contact gap {:.3e}",
        f.max_edge_residual, f.min_nonedge_gap
    );
    Ok(check("feasible", f.holds(FEASIBILITY_TOLERANCE)))
}

/// Runs one subcommand. `Ok(true)` iff every check it performs passes.
pub fn run_cli(cli: Cli) -> Result<bool, HarnessError> {
    match cli.command {
        Command::Pack(a) => pack(a),
        Command::Open(a) => open(a),
        Command::Analyze(a) => analyze(a),
        Command::Stress(a) => stress(a),
        Command::Trials(a) => trials(a),
        Command::Densify(a) => densify(a),
        Command::Render(a) => {
            let packing = io::read_packing(&a.packing)?;
            write_svg(&a.out, &packing)?;
            println!("wrote {}", a.out.display());
            Ok(true)
        }
        Command::Counterexample(a) => {
            let packing = square_counterexample(a.t)?;
            io::write_packing(&a.out, &packing)?;
            if let Some(svg) = &a.svg {
                write_svg(svg, &packing)?;
            }
            println!("wrote {}", a.out.display());
            feasible(&packing)
        }
    }
}

fn pack(a: PackArgs) -> Result<bool, HarnessError> {
    let file = io::read_edge_list(&a.graph)?;
    let body = io::read_body(&a.body)?;
    let pins = match (&a.pin, file.pins()) {
        (Some(text), _) => io::parse_pins(text)?,
        (None, Some(pins)) => pins,
        (None, None) => {
            return Err(HarnessError::Config(
                "give --pin or an `outer` line in the graph file".into(),
            ))
        }
    };
    let tri = Triangulation::from_graph(file.graph, Some(pins.vertices))?;
    let solved = body_pack(&body, &tri, &pins, &ContinuationConfig::default())?;
    let d = &solved.diagnostics;
    println!(
        "homotopy steps {} (rejected {}), Newton iterations {}, max condition {:.3e}",
        d.steps.len(),
        d.rejected_steps,
        d.newton_iterations,
        d.max_condition()
    );
    io::write_packing(&a.out, &solved.packing)?;
    if let Some(svg) = &a.svg {
        write_svg(svg, &solved.packing)?;
    }
    println!("wrote {}", a.out.display());
    feasible(&solved.packing)
}

fn first_triangle(packing: &Packing) -> Option<[usize; 3]> {
    let g = &packing.graph;
    g.edges().iter().find_map(|&(u, v)| {
        g.neighbors(u)
            .iter()
            .copied()
            .filter(|&w| w != v && g.has_edge(v, w))
            .min()
            .map(|w| [u, v, w])
    })
}

fn open(a: OpenArgs) -> Result<bool, HarnessError> {
    let packing = io::read_packing(&a.packing)?;
    let sub = io::read_edge_list(&a.keep_edges)?.graph;
    let vertices = match &a.pin_vertices {
        Some(text) => {
            let v: Vec<usize> = text
                .split_whitespace()
                .map(|w| {
                    w.parse()
                        .map_err(|_| HarnessError::Config(format!("bad pinned vertex `{w}`")))
                })
                .collect::<Result<_, _>>()?;
            <[usize; 3]>::try_from(v)
                .map_err(|_| HarnessError::Config("give exactly three pinned vertices".into()))?
        }
        None => first_triangle(&packing)
            .ok_or_else(|| HarnessError::Config("the graph has no triangle".into()))?,
    };
    if vertices.iter().any(|&v| v >= packing.vertex_count()) {
        return Err(HarnessError::Config(format!(
            "pinned vertices {vertices:?} out of range"
        )));
    }
    let pins = PinnedTriangle::new(vertices, vertices.map(|v| packing.p[v]))?;
    let flow = subgraph_flow(
        &packing,
        &pins,
        &sub,
        a.flow_time,
        a.steps,
        &ContinuationConfig::default(),
    )?;
    println!(
        "flow reached t = {:.3e} in {} steps",
        flow.t_reached,
        flow.diagnostics.steps.len()
    );
    io::write_packing(&a.out, &flow.packing)?;
    println!("wrote {}", a.out.display());
    let recomputed = flow
        .packing
        .recomputed_contact_graph(FEASIBILITY_TOLERANCE)?;
    let ok = feasible(&flow.packing)?;
    let sorted = |g: &crate::sparsity::ContactGraph| {
        let mut e = g.edges().to_vec();
        e.sort_unstable();
        e
    };
    Ok(check(
        "contact graph equals the kept edges",
        sorted(&recomputed) == sorted(&sub),
    ) && ok)
}

#[derive(serde::Serialize)]
struct Analysis {
    vertices: usize,
    edges: usize,
    feasible: bool,
    sparse_22: bool,
    tight_22: bool,
    sparse_23: bool,
    noncrossing: bool,
    rank: usize,
    independent: bool,
    rank_ambiguous: bool,
    kernel_dim: Option<usize>,
    isometry_dim: Option<usize>,
    infinitesimally_rigid: Option<bool>,
    radii_projection_rank: usize,
}

fn analyze(a: AnalyzeArgs) -> Result<bool, HarnessError> {
    let packing = io::read_packing(&a.packing)?;
    let ok = feasible(&packing)?;
    let graph = packing.recomputed_contact_graph(FEASIBILITY_TOLERANCE)?;
    let c22 = pebble_sparse(&graph, 2);
    let c23 = pebble_sparse(&graph, 3);
    let indep = independence_report(&packing, TolerancePolicy::Default)?;
    let rigidity = infinitesimal_rigidity_test(&packing).ok();
    let radii = radii_projection_check(&packing)?;
    let analysis = Analysis {
        vertices: packing.vertex_count(),
        edges: packing.edge_count(),
        feasible: ok,
        sparse_22: c22.is_sparse(),
        tight_22: c22.is_tight(),
        sparse_23: c23.is_sparse(),
        noncrossing: !packing.has_crossing_segments(),
        rank: indep.rank,
        independent: indep.independent,
        rank_ambiguous: indep.ambiguous,
        kernel_dim: rigidity.as_ref().map(|r| r.kernel_dim),
        isometry_dim: rigidity.as_ref().map(|r| r.k),
        infinitesimally_rigid: rigidity.as_ref().map(|r| r.kernel_dim == r.k),
        radii_projection_rank: radii.projection_rank,
    };
    let text = serde_json::to_string_pretty(&analysis).expect("analysis serializes");
    println!("{text}");
    if let Some(path) = &a.json {
        write_text(path, &text)?;
    }
    let mut all = ok;
    if a.expect_independent {
        all &= check("independent", indep.independent);
    }
    if a.expect_sparse {
        all &= check("(2,2)-sparse", c22.is_sparse());
    }
    Ok(all)
}

fn format_stress(a: &Option<Vec<f64>>) -> String {
    match a {
        Some(a) => format!("{a:?}"),
        None => "none".into(),
    }
}

fn stress(a: StressArgs) -> Result<bool, HarnessError> {
    let packing = io::read_packing(&a.packing)?;
    let ok = feasible(&packing)?;
    let equilibrium = equilibrium_stress(&packing)?;
    let length = edge_length_stress(&packing)?;
    println!("edges: {:?}", packing.graph.edges());
    println!("equilibrium stress: {}", format_stress(&equilibrium));
    println!("edge-length stress: {}", format_stress(&length));
    if let Some(s) = &equilibrium {
        let report = index_bound_check(&packing, s)?;
        println!(
            "vertex indices {:?}, sum {} against upper bound {:?}; below 4 at {:?}",
            report.indices, report.sum, report.upper_bound, report.below_lower_bound
        );
    }
    Ok(if a.expect_stress {
        check("stress exists", equilibrium.is_some()) && ok
    } else {
        ok
    })
}

fn trials(a: TrialsArgs) -> Result<bool, HarnessError> {
    let cfg = match &a.config {
        Some(path) => TrialConfig::from_toml(
            &std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?,
        )?,
        None => TrialConfig::default(),
    }
    .with_env_seed()?;
    let report = run_theorem_trials(&cfg)?;
    let table = report.table();
    print!("{table}");
    if let Some(path) = &a.out {
        write_text(path, &report.to_json())?;
    }
    if let Some(path) = &a.table {
        write_text(path, &table)?;
    }
    let s = &report.summary;
    let mut ok = check("sparse and non-crossing", s.all_sparse_and_planar());
    ok &= check("independent", s.all_independent());
    ok &= check("tight kernels are 2", s.tight_kernels_are_two());
    ok &= check("rank-ambiguous rate below 5%", s.ambiguous_rate() < 0.05);
    if a.control > 0 {
        let records = run_control_campaign(cfg.seed, a.control)?;
        let good = records.iter().filter(|r| r.as_expected).count();
        println!("control: {good}/{} as expected", records.len());
        ok &= check("Euclidean control", good == records.len());
    }
    Ok(ok)
}

fn densify(a: DensifyArgs) -> Result<bool, HarnessError> {
    let graph = io::read_edge_list(&a.graph)?.graph;
    let body = io::read_body(&a.body)?;
    let seed = env_seed()?.unwrap_or(a.seed);
    let cfg = DensifyConfig {
        eps: a.eps,
        ..Default::default()
    };
    let out = densify_independent(&body, &graph, seed, &cfg)?;
    println!(
        "rank {} -> {} of {} edges after {} attempt(s); radial distance {:.3e}",
        out.initial_rank,
        out.rank,
        out.packing.edge_count(),
        out.attempts,
        out.radial_distance
    );
    write_text(&a.out_body, &io::body_to_json(&out.body))?;
    io::write_packing(&a.out, &out.packing)?;
    let ok = feasible(&out.packing)?;
    Ok(check("independent", out.is_independent())
        && check("within eps", out.radial_distance <= a.eps)
        && ok)
}
