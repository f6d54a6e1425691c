use crate::{BackendArg, Common, GenKind, PipelineMode, ProfileArg, SimMode, StreamMode, VerifyKind};
use anyhow::{bail, Context, Result};
use desparsify::cluster::{cluster_from_sketch, run_backend, Backend, ClusterConfig};
use desparsify::desparsify::{
    desparsify_cut, desparsify_from_sketch, desparsify_spectral, desparsify_spectral_from_sketch, Desparsified,
    PipelineConfig,
};
use desparsify::gen;
use desparsify::graphcore::io::{parse_graph, parse_weighted, write_graph, write_partition};
use desparsify::harness::{
    distributed_run, dynamic_stream_run, insertion_only_run, mpc_run, parse_stream, GuardedRng,
};
use desparsify::profile::ProfileName;
use desparsify::report::{to_json, SCHEMA_VERSION};
use desparsify::sketches::SketchSuite;
use desparsify::spectral::{is_cut_sparsifier_bruteforce, is_spectral_sparsifier, MAX_BRUTEFORCE_N};
use desparsify::{Error, Graph, Profile, Weighted, WeightedGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::path::Path;
use std::process::ExitCode;

/// Report body plus whether every verdict in it passed.
pub struct Outcome {
    pub body: Map<String, Value>,
    pub ok: bool,
    /// Output already went to stdout; no report.
    pub quiet: bool,
}

impl Outcome {
    fn new(body: Value, ok: bool) -> Self {
        let body = match body {
            Value::Object(m) => m,
            other => Map::from_iter([("result".to_string(), other)]),
        };
        Outcome { body, ok, quiet: false }
    }
}

pub fn finish(command: &str, report: Option<&Path>, outcome: Result<Outcome>) -> ExitCode {
    let (mut doc, ok) = match outcome {
        Ok(o) if o.quiet => return ExitCode::SUCCESS,
        Ok(o) => (o.body, o.ok),
        Err(e) => {
            let retryable = e.downcast_ref::<Error>().is_some_and(Error::is_retryable);
            let mut m = Map::new();
            m.insert("error".into(), json!(format!("{e:#}")));
            m.insert("retryable".into(), json!(retryable));
            (m, false)
        }
    };
    doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
    doc.insert("command".into(), json!(command));
    doc.insert("ok".into(), json!(ok));
    let text = match to_json(&Value::Object(doc)) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("failed to encode report: {e}");
            return ExitCode::FAILURE;
        }
    };
    let written = match report {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("{e:#}");
        return ExitCode::FAILURE;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    if let Some(p) = path {
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn profile(arg: ProfileArg) -> Profile {
    Profile::by_name(match arg {
        ProfileArg::Paper => ProfileName::Paper,
        ProfileArg::Desk => ProfileName::Desk,
    })
}

fn pipeline_config(c: &Common) -> PipelineConfig {
    let mut cfg = PipelineConfig::new(c.eps, c.seed).with_profile(profile(c.profile));
    cfg.max_attempts = c.max_attempts;
    cfg.max_iters = c.max_iters;
    cfg
}

fn cluster_config(backend: BackendArg, runs: usize, seed: u64) -> ClusterConfig {
    let mut cfg = ClusterConfig::pivot(seed, runs);
    if backend == BackendArg::Brute {
        cfg.backend = Backend::BruteForce;
    }
    cfg
}

fn suite_of(g: &Graph, c: &Common) -> Result<SketchSuite> {
    let p = profile(c.profile);
    let n = g.n();
    let lambda = c.lambda.unwrap_or_else(|| p.lambda(n, c.eps));
    let mut suite = SketchSuite::with_phi(c.seed, n, c.eps, lambda, p.phi(n, c.eps))?;
    suite.insert_graph(g);
    Ok(suite)
}

fn config_json(c: &Common) -> Value {
    json!({
        "eps": c.eps,
        "lambda": c.lambda,
        "seed": c.seed,
        "profile": profile(c.profile).name,
        "max_attempts": c.max_attempts,
        "max_iters": c.max_iters,
    })
}

/// Runs each requested check of `h` against `g` at `band`.
fn verdicts<H: Weighted + Sync>(h: &H, g: &Graph, band: f64, kinds: &[VerifyKind]) -> Result<(Value, bool)> {
    let mut out = Map::new();
    let mut all = true;
    for kind in kinds {
        let (name, v, ok) = match kind {
            VerifyKind::None => continue,
            VerifyKind::Cut if g.n() > MAX_BRUTEFORCE_N => (
                "cut",
                json!({"ok": false, "reason": format!("n = {} exceeds the exhaustive limit {MAX_BRUTEFORCE_N}", g.n())}),
                false,
            ),
            VerifyKind::Cut => {
                let v = is_cut_sparsifier_bruteforce(h, g, band)?;
                ("cut", serde_json::to_value(&v)?, v.ok)
            }
            VerifyKind::Spectral => {
                let v = is_spectral_sparsifier(h, g, band)?;
                ("spectral", serde_json::to_value(&v)?, v.ok)
            }
            VerifyKind::Twp => {
                let total = h.total_weight();
                let ok = (total - g.m() as f64).abs() <= 1e-9 * (g.m() as f64).max(1.0);
                ("twp", json!({"ok": ok, "total_weight": total, "m": g.m()}), ok)
            }
        };
        all &= ok;
        out.insert(name.into(), v);
    }
    Ok((Value::Object(out), all))
}

#[allow(clippy::too_many_arguments)]
pub fn gen(
    kind: GenKind,
    n: usize,
    sizes: &[usize],
    bridges: usize,
    p: f64,
    degree: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = match kind {
        GenKind::CliqueUnion => gen::clique_union(sizes, bridges)?,
        GenKind::RandomGnp => gen::random_gnp(n, p, &mut rng)?,
        GenKind::ExpanderLike => gen::expander_like(n, degree, &mut rng)?,
        GenKind::Tree => gen::random_tree(n, &mut rng),
        GenKind::Cycle => gen::cycle(n)?,
    };
    let text = write_graph(&g);
    let mut outcome = Outcome::new(json!({"n": g.n(), "m": g.m(), "seed": seed}), true);
    match out {
        Some(_) => write_out(out, &text)?,
        None => {
            print!("{text}");
            outcome.quiet = true;
        }
    }
    Ok(outcome)
}

fn weighted_input(g: &Graph, sparsifier: Option<&Path>, sample_c: f64, seed: u64) -> Result<WeightedGraph> {
    match sparsifier {
        Some(p) => Ok(parse_weighted(&read(p)?).with_context(|| format!("parsing {}", p.display()))?),
        None => Ok(gen::resistance_sample(g, sample_c, &mut ChaCha8Rng::seed_from_u64(seed ^ 0x5A3D))?),
    }
}

pub fn desparsify(
    input: &Path,
    c: &Common,
    mode: PipelineMode,
    sparsifier: Option<&Path>,
    sample_c: f64,
    verify: &[VerifyKind],
    out: Option<&Path>,
) -> Result<Outcome> {
    let g = read_graph(input)?;
    let cfg = pipeline_config(c);
    let result: Desparsified = match mode {
        PipelineMode::Sketch => desparsify_from_sketch(&suite_of(&g, c)?, &cfg)?,
        PipelineMode::SpectralSketch => desparsify_spectral_from_sketch(&suite_of(&g, c)?, &cfg)?,
        PipelineMode::Cut => desparsify_cut(&weighted_input(&g, sparsifier, sample_c, c.seed)?, g.m(), &cfg)?,
        PipelineMode::Spectral => {
            desparsify_spectral(&weighted_input(&g, sparsifier, sample_c, c.seed)?, g.m(), &cfg)?
        }
    };
    if result.graph.n() != g.n() {
        bail!("output has {} vertices, input {}", result.graph.n(), g.n());
    }
    write_out(out, &write_graph(&result.graph))?;
    let (checks, ok) = verdicts(&result.graph, &g, result.provenance.band, verify)?;
    Ok(Outcome::new(
        json!({
            "config": config_json(c),
            "input": {"n": g.n(), "m": g.m()},
            "output": {"m": result.graph.m(), "fixed_edges": result.fixed.len()},
            "provenance": result.provenance,
            "verdicts": checks,
        }),
        ok,
    ))
}

pub fn cluster(
    input: &Path,
    c: &Common,
    backend: BackendArg,
    runs: usize,
    from_sketch: bool,
    out: Option<&Path>,
) -> Result<Outcome> {
    let g = read_graph(input)?;
    let ccfg = cluster_config(backend, runs, c.seed);
    let body = if from_sketch {
        let res = cluster_from_sketch(&suite_of(&g, c)?, &pipeline_config(c), &ccfg, Some(&g))?;
        write_out(out, &write_partition(&res.result.partition))?;
        json!({
            "config": config_json(c),
            "clustering": res.result,
            "cost_on_sparsifier": res.cost_on_sparsifier,
            "provenance": res.sparsifier.provenance,
        })
    } else {
        let res = run_backend(&g, &ccfg)?;
        write_out(out, &write_partition(&res.partition))?;
        json!({"config": config_json(c), "clustering": res})
    };
    Ok(Outcome::new(body, true))
}

pub fn stream(
    input: &Path,
    c: &Common,
    mode: StreamMode,
    n: Option<usize>,
    backend: BackendArg,
    runs: usize,
) -> Result<Outcome> {
    let events = parse_stream(&read(input)?)?;
    let n = n.unwrap_or_else(|| events.iter().map(|e| e.u.max(e.v) + 1).max().unwrap_or(0));
    let cfg = pipeline_config(c);
    let ccfg = cluster_config(backend, runs, c.seed);
    match mode {
        StreamMode::Dynamic => {
            let run = dynamic_stream_run(n, &events, &cfg, &ccfg)?;
            Ok(Outcome::new(
                json!({
                    "config": config_json(c),
                    "events": run.events,
                    "n": n,
                    "matches_offline": run.matches_offline,
                    "clustering": run.clustering.result,
                    "s1_space_bytes": run.suite.s1_space_bytes(),
                }),
                run.matches_offline,
            ))
        }
        StreamMode::Insertion => {
            let mut rng = GuardedRng::new(c.seed);
            let run = insertion_only_run(n, &events, &cfg, &ccfg, &mut rng)?;
            let g = desparsify::harness::validate_stream(n, &events)?;
            let (checks, ok) = verdicts(&run.graph, &g, run.band, &[VerifyKind::Spectral, VerifyKind::Twp])?;
            Ok(Outcome::new(
                json!({
                    "config": config_json(c),
                    "events": events.len(),
                    "n": n,
                    "digest": run.digest,
                    "spanners": run.state.spanners.count(),
                    "stretch": run.state.spanners.stretch(),
                    "spanner_edges": run.state.spanners.total_edges(),
                    "leftover_edges": run.state.leftover_count,
                    "candidate_pairs": run.candidates.len(),
                    "ellipsoid_iterations": run.ellipsoid_iterations,
                    "termination": run.termination,
                    "rounding_attempts": run.rounding_attempts,
                    "band": run.band,
                    "clustering": run.clustering,
                    "verdicts": checks,
                }),
                ok,
            ))
        }
    }
}

pub fn simulate(
    input: &Path,
    c: &Common,
    mode: SimMode,
    machines: usize,
    cap: Option<usize>,
    backend: BackendArg,
    runs: usize,
) -> Result<Outcome> {
    let g = read_graph(input)?;
    let parts = gen::split_edges(&g, machines, &mut ChaCha8Rng::seed_from_u64(c.seed));
    let cfg = pipeline_config(c);
    let ccfg = cluster_config(backend, runs, c.seed);
    match mode {
        SimMode::Distributed => {
            let run = distributed_run(g.n(), &parts, &cfg, &ccfg)?;
            let ok = run.comm.matches_offline;
            Ok(Outcome::new(
                json!({
                    "config": config_json(c),
                    "per_machine_bytes": run.comm.upload_bytes,
                    "rounds": 1,
                    "messages": machines,
                    "comm": run.comm,
                    "clustering": run.clustering.result,
                }),
                ok,
            ))
        }
        SimMode::Mpc => {
            let run = mpc_run(g.n(), &parts, &cfg, &ccfg, cap)?;
            let per_machine: Vec<usize> =
                (0..machines).map(|j| run.report.sent.iter().map(|r| r[j]).sum()).collect();
            let ok = run.report.matches_offline && run.report.rounds == 2;
            Ok(Outcome::new(
                json!({
                    "config": config_json(c),
                    "per_machine_bytes": per_machine,
                    "rounds": run.report.rounds,
                    "messages": run.report.messages,
                    "mpc": run.report,
                    "clustering": run.clustering.result,
                }),
                ok,
            ))
        }
    }
}

pub fn verify(h_path: &Path, g_path: &Path, eps: f64, kinds: &[VerifyKind]) -> Result<Outcome> {
    let h = parse_weighted(&read(h_path)?).with_context(|| format!("parsing {}", h_path.display()))?;
    let g = read_graph(g_path)?;
    if h.n() != g.n() {
        return Err(Error::SizeMismatch { expected: g.n(), got: h.n() }.into());
    }
    let (checks, ok) = verdicts(&h, &g, eps, kinds)?;
    Ok(Outcome::new(json!({"eps": eps, "n": g.n(), "verdicts": checks}), ok))
}
