use std::fmt::Write as _;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use kostant::automaton::build_dfa;
use kostant::game::{
    moves_from_labels, play as play_game, reachable_graph, reachable_graph_from, Configuration, GameSpec,
    GameTrace, PlayOutcome, Strategy,
};
use kostant::mukai::{check_mukai_consequence, check_strong_inequality, parabolic_datum, string_identity, sweep};
use kostant::root_system::{ActiveSet, CartanType, DynkinDiagram, RootSystem};
use kostant::syt::{count_syt, fill_tableau, sequence_of_tableau, shape_of, GrassmannianPermutation, StandardTableau};
use kostant_service::{serve as serve_http, ServeConfig};
use serde_json::json;

use crate::{ActiveArgs, DiagramArgs, Emit, GameArgs, OutArgs, SytAction};

pub fn write_out(out: &OutArgs, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &out.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn unsupported(emit: Emit, what: &str) -> anyhow::Error {
    let name = match emit {
        Emit::Text => "text",
        Emit::Json => "json",
        Emit::Dot => "dot",
        Emit::Csv => "csv",
        Emit::Words => "words",
        Emit::Counts => "counts",
    };
    anyhow::anyhow!("--emit {name} is not available for {what}")
}

pub fn load_diagram(args: &DiagramArgs) -> Result<DynkinDiagram> {
    match (&args.ty, &args.diagram_file) {
        (Some(ty), None) => Ok(DynkinDiagram::from_type(ty.parse::<CartanType>()?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(DynkinDiagram::parse_json(&text)?)
        }
        _ => bail!("give exactly one of --type and --diagram-file"),
    }
}

pub fn active_set(n: usize, args: &ActiveArgs) -> Result<ActiveSet> {
    match (&args.active, &args.inactive) {
        (Some(i), None) => Ok(ActiveSet::from_labels(n, i).context("--active")?),
        (None, Some(j)) => Ok(ActiveSet::from_labels(n, j).context("--inactive")?.complement()),
        (None, None) => bail!("give --active or --inactive"),
        (Some(_), Some(_)) => bail!("--active and --inactive are mutually exclusive"),
    }
}

fn game_spec(args: &GameArgs) -> Result<GameSpec> {
    let d = load_diagram(&args.diagram)?;
    let g = match &args.initial {
        Some(chips) => {
            if chips.iter().any(|&c| c < 0) {
                bail!("--initial chips must be non-negative");
            }
            GameSpec::classical(d, Configuration::from_i64s(chips)?)?
        }
        None => {
            let active = active_set(d.rank(), &args.active)?;
            GameSpec::modified(d, active)?
        }
    };
    Ok(match args.step_cap {
        Some(cap) => g.with_step_cap(cap),
        None => g,
    })
}

pub fn roots(args: &DiagramArgs, coroots: bool, emit: Emit, out: &OutArgs) -> Result<()> {
    let d = load_diagram(args)?;
    let rs = RootSystem::new(&d)?;
    let list = if coroots { rs.positive_coroots() } else { rs.positive_roots() };
    let text = match emit {
        Emit::Json => pretty(&json!({
            "diagram": d.label().to_string(),
            "basis": if coroots { "coroot" } else { "root" },
            "roots": list.iter().map(|r| json!({ "coeffs": r.coeffs, "height": r.height() })).collect::<Vec<_>>(),
        }))?,
        Emit::Text => {
            let mut s = format!("{} {}\n", d.label(), d.ascii());
            for r in list {
                let coeffs: Vec<String> = r.coeffs.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "({})  height {}", coeffs.join(","), r.height());
            }
            let _ = write!(s, "{} positive {}", list.len(), if coroots { "coroots" } else { "roots" });
            s
        }
        other => return Err(unsupported(other, "roots")),
    };
    write_out(out, &text)
}

pub fn play(args: &GameArgs, strategy: &str, emit: Emit, out: &OutArgs) -> Result<()> {
    let g = game_spec(args)?;
    let strategy: Strategy = strategy.parse().context("--strategy")?;
    let result = play_game(&g, strategy);
    let trace = GameTrace::new(&g, &result);
    let text = match emit {
        Emit::Json => pretty(&trace)?,
        Emit::Text => {
            let mut s = format!("start {}\n", trace.configs[0]);
            for (m, c) in trace.moves.iter().zip(&trace.configs[1..]) {
                let _ = writeln!(s, "fire {m} -> {c}");
            }
            let outcome = match result.outcome {
                PlayOutcome::Terminated => "terminated",
                PlayOutcome::Diverged => "diverged",
            };
            let word: Vec<String> = trace.word.iter().map(|v| format!("s{v}")).collect();
            let _ = write!(s, "{outcome} at {} after {} moves; word {}", trace.final_config, trace.moves.len(), word.concat());
            s
        }
        other => return Err(unsupported(other, "play")),
    };
    write_out(out, &text)
}

pub fn graph(args: &GameArgs, all_starts: bool, node_cap: usize, emit: Emit, out: &OutArgs) -> Result<()> {
    let graph = if all_starts {
        let d = load_diagram(&args.diagram)?;
        let n = d.rank();
        let starts: Vec<_> = (0..n).map(|i| Configuration::basis(n, i)).collect();
        let g = GameSpec::classical(d, starts[0].clone())?;
        reachable_graph_from(&g, &starts, node_cap)?
    } else {
        reachable_graph(&game_spec(args)?, node_cap)?
    };
    let text = match emit {
        Emit::Dot => graph.to_dot(),
        Emit::Json => pretty(&graph.to_json())?,
        other => return Err(unsupported(other, "graph")),
    };
    write_out(out, &text)
}

pub fn dfa(
    args: &DiagramArgs,
    active: &ActiveArgs,
    minimize: bool,
    max_len: usize,
    emit: Emit,
    out: &OutArgs,
) -> Result<()> {
    let d = load_diagram(args)?;
    let active = active_set(d.rank(), active)?;
    let mut dfa = build_dfa(&d, &active)?;
    if minimize {
        dfa = dfa.minimize();
    }
    let text = match emit {
        Emit::Dot => dfa.to_dot(),
        Emit::Json => pretty(&dfa.to_json())?,
        Emit::Words => {
            let lang = dfa.enumerate_language(max_len);
            lang.words()
                .map(|w| {
                    if w.is_empty() {
                        "ε".to_string()
                    } else {
                        w.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(",")
                    }
                })
                .collect::<Vec<_>>()
                .join("\n")
        }
        Emit::Counts => dfa
            .count_by_length(max_len)
            .iter()
            .enumerate()
            .map(|(len, c)| format!("{len} {c}"))
            .collect::<Vec<_>>()
            .join("\n"),
        other => return Err(unsupported(other, "dfa")),
    };
    write_out(out, &text)
}

pub fn syt(n: usize, k: usize, action: &SytAction) -> Result<()> {
    if n < 2 || k == 0 || k >= n {
        bail!("need n >= 2 and 1 <= k < n");
    }
    let stdout = OutArgs { out: None };
    match action {
        SytAction::Fill { moves, emit } => {
            let moves = moves_from_labels(moves, n - 1)?;
            let t = fill_tableau(&moves, n, k - 1)?;
            let text = match emit {
                Emit::Text => t.to_grid(),
                Emit::Json => pretty(&t)?,
                other => return Err(unsupported(*other, "syt fill")),
            };
            write_out(&stdout, &text)
        }
        SytAction::Sequence { rows } => {
            let rows: Vec<Vec<usize>> = serde_json::from_str(rows).context("tableau rows")?;
            let t = StandardTableau::new(rows)?;
            let seq = sequence_of_tableau(&t, n, k - 1)?;
            let labels: Vec<String> = seq.iter().map(|v| (v + 1).to_string()).collect();
            write_out(&stdout, &labels.join(","))
        }
        SytAction::Counts { emit } => {
            let rows: Vec<_> = GrassmannianPermutation::all(n, k)
                .into_iter()
                .map(|w| {
                    let shape = shape_of(&w)?;
                    let count = count_syt(&shape);
                    Ok((w, shape, count))
                })
                .collect::<Result<_>>()?;
            let text = match emit {
                Emit::Text => rows
                    .iter()
                    .map(|(w, shape, count)| {
                        let line: Vec<String> = w.one_line().iter().map(ToString::to_string).collect();
                        format!("[{}]  shape {shape}  tableaux {count}", line.join(","))
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
                Emit::Json => pretty(
                    &rows
                        .iter()
                        .map(|(w, shape, count)| {
                            json!({ "one_line": w.one_line(), "shape": shape, "tableaux": count.to_string() })
                        })
                        .collect::<Vec<_>>(),
                )?,
                other => return Err(unsupported(*other, "syt counts")),
            };
            write_out(&stdout, &text)
        }
    }
}

pub fn mukai(
    ty: Option<&str>,
    delta_p: Option<&[usize]>,
    max_rank: Option<usize>,
    emit: Option<Emit>,
    out: &OutArgs,
) -> Result<()> {
    if let Some(max_rank) = max_rank {
        let report = sweep(max_rank)?;
        let text = match emit.unwrap_or(Emit::Csv) {
            Emit::Csv => report.to_csv(),
            Emit::Json => pretty(&report)?,
            other => return Err(unsupported(other, "mukai --max-rank")),
        };
        write_out(out, &text)?;
        let violations = report.violations().count();
        if violations > 0 || !report.lemma_failures.is_empty() {
            return Err(crate::VerificationFailed(format!(
                "{violations} inequality violations, root sum lemma failures {:?}",
                report.lemma_failures
            ))
            .into());
        }
        return Ok(());
    }
    let Some(ty) = ty else {
        bail!("give --type with --delta-p, or --max-rank");
    };
    let ty: CartanType = ty.parse()?;
    let rs = RootSystem::of_type(ty);
    let labels = delta_p.unwrap_or(&[]);
    let p = ActiveSet::from_labels(ty.rank, labels).context("--delta-p")?;
    let datum = parabolic_datum(&rs, &p)?;
    let strong = check_strong_inequality(&datum);
    let consequence = check_mukai_consequence(&datum)?;
    let strings = string_identity(&rs, &p)?;
    let text = match emit.unwrap_or(Emit::Json) {
        Emit::Json => pretty(&json!({
            "datum": datum,
            "strong": strong,
            "consequence": consequence,
            "strings": strings,
        }))?,
        other => return Err(unsupported(other, "mukai --type")),
    };
    write_out(out, &text)
}

pub fn serve(addr: SocketAddr, static_dir: Option<PathBuf>, log: Option<PathBuf>, idle_timeout: u64) -> Result<()> {
    let config = ServeConfig {
        addr,
        static_dir,
        idle_timeout: Duration::from_secs(idle_timeout),
        log,
    };
    let rt = tokio::runtime::Runtime::new()?;
    eprintln!("listening on http://{addr}");
    rt.block_on(serve_http(config))?;
    Ok(())
}
