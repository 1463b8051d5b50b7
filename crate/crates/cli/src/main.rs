//! `kpeaked`: solve, check, generate and reduce election-control instances.
//!
//! Exit status: 0 for a yes-answer (or success), 1 for a no-answer, 2 for
//! any error.

mod record;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kpeaked::av2dp::{solve_av2, DEFAULT_MAX_R};
use kpeaked::control::{brute, verify_witness, ControlInstance, Decision, Problem, DEFAULT_SUBSET_CAP};
use kpeaked::fpt::{solve_av_fpt, solve_dv_fpt};
use kpeaked::gen::{random_ac, random_av, random_dc, random_dv, random_mrsp, random_vis, ElectionShape};
use kpeaked::graph::random_graph;
use kpeaked::interval::{build_2interval_rep, pad_to_lemma_form, verify_claim, verify_rep};
use kpeaked::io::{parse_graph, parse_mrsp, parse_vis, write_graph, write_mrsp, write_vis, ElectionFile};
use kpeaked::mrsp::{brute_mrsp, solve_mrsp_with, ExpandMode, DEFAULT_BRUTE_CAP};
use kpeaked::peaked::min_peaks;
use kpeaked::reductions::{
    brute_is, brute_vc, brute_vis, reduce_is3_to_av3, reduce_is_to_dc3, reduce_is_to_dc3_literal,
    reduce_vc3_to_dv2, reduce_vis_to_av2,
};
use kpeaked::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use record::{answer, Format, ResultRecord, WitnessRecord};

#[derive(Parser)]
#[command(name = "kpeaked", version, about = "Election control under r-approval in k-peaked elections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    Av,
    Dv,
    Ac,
    Dc,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Av => Problem::Av,
            ProblemArg::Dv => Problem::Dv,
            ProblemArg::Ac => Problem::Ac,
            ProblemArg::Dc => Problem::Dc,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Dp,
    Fpt,
    Brute,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Add wall-clock milliseconds to the record.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a control instance read from an election file.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[arg(long, value_enum, default_value = "brute")]
        algo: Algo,
        /// Overrides the file's budget.
        #[arg(long)]
        budget: Option<usize>,
        /// Overrides the file's declared peak bound.
        #[arg(long)]
        k: Option<usize>,
        /// Largest approval width the dynamic program accepts.
        #[arg(long, default_value_t = DEFAULT_MAX_R)]
        max_r: usize,
        /// Largest candidate pool for exhaustive candidate control.
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Exhaustive search; same as `solve --algo brute`.
    Oracle {
        file: PathBuf,
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Report the fewest peaks of every vote; fails when one exceeds k.
    CheckKpeaked {
        file: PathBuf,
        /// Bound to check against; defaults to the file's `k`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build a control instance from a hardness source instance.
    Reduce {
        #[arg(value_enum)]
        kind: ReduceKind,
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        /// Use the unadjusted family weights for is-to-dc3.
        #[arg(long)]
        literal: bool,
        /// Write the instance here and the expected answer to `<out>.label`.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Generate a random instance from a seed.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Decide a Multi-r-Set Packing instance.
    Mrsp {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "search")]
        algo: MrspAlgo,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: MrspMode,
        #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
        cap: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Build and verify a 2-interval representation of a graph.
    IntervalRep {
        graph: PathBuf,
        /// Print the representation before padding.
        #[arg(long)]
        raw: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    VisToAv2,
    Vc3ToDv2,
    Is3ToAv3,
    IsToDc3,
}

#[derive(Clone, Copy, ValueEnum)]
enum MrspAlgo {
    Search,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum MrspMode {
    Exhaustive,
    Pruning,
}

#[derive(Subcommand)]
enum GenKind {
    /// Random election file for one control problem.
    Election {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Peak bound of the drawn votes; unrestricted rankings when absent.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 6)]
        registered: usize,
        #[arg(long, default_value_t = 6)]
        unregistered: usize,
        #[arg(long, default_value_t = 2)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random graph of bounded degree.
    Graph {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long)]
        connected: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random Multi-r-Set Packing instance.
    Mrsp {
        #[arg(long, default_value_t = 10)]
        universe: usize,
        #[arg(long, default_value_t = 3)]
        r: usize,
        #[arg(long, default_value_t = 8)]
        sets: usize,
        #[arg(long, default_value_t = 2)]
        max_cap: usize,
        #[arg(long, default_value_t = 3)]
        target: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random interval-selection instance.
    Vis {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        max_left: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn load_instance(file: &Path, problem: ProblemArg, budget: Option<usize>, k: Option<usize>) -> Result<ControlInstance> {
    let mut f = ElectionFile::parse(&read(file)?)?;
    if let Some(k) = k {
        f.k = k;
    }
    f.instance(problem.into(), budget)
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn decide(inst: &ControlInstance, algo: Algo, max_r: usize, cap: usize) -> Result<Decision> {
    match (algo, inst) {
        (Algo::Dp, ControlInstance::Av(i)) => solve_av2(i, max_r),
        (Algo::Dp, _) => Err(Error::OutOfScope(
            "the dynamic program solves control by adding votes only".into(),
        )),
        (Algo::Fpt, ControlInstance::Av(i)) => solve_av_fpt(i),
        (Algo::Fpt, ControlInstance::Dv(i)) => solve_dv_fpt(i),
        (Algo::Fpt, _) => Err(Error::OutOfScope(
            "the parameterized algorithms cover adding and deleting votes only".into(),
        )),
        (Algo::Brute, _) => brute(inst, cap),
    }
}

fn run_decision(inst: ControlInstance, algo: Algo, max_r: usize, cap: usize, out: &Output) -> Result<bool> {
    let start = Instant::now();
    let d = decide(&inst, algo, max_r, cap)?;
    let ms = elapsed_ms(start);
    if let Some(w) = &d.witness {
        if !verify_witness(&inst, w) {
            return Err(Error::Contract("solver returned a witness that does not verify".into()));
        }
    }
    let rec = ResultRecord {
        problem: inst.problem().to_string(),
        algorithm: algo.to_possible_value().expect("not skipped").get_name().to_string(),
        answer: answer(d.answer),
        witness: d.witness.as_ref().map(|w| WitnessRecord::from_witness(w, inst.election())),
        budget_used: d.witness.as_ref().map_or(0, |w| w.size()),
        nodes: d.stats.nodes,
        ms: out.timing.then_some(ms),
    };
    print!("{}", rec.render(out.format));
    Ok(d.answer)
}

fn check_kpeaked(file: &Path, k: Option<usize>, format: Format) -> Result<bool> {
    let f = ElectionFile::parse(&read(file)?)?;
    let k = k.unwrap_or(f.k);
    let mut worst = 0;
    let sections = [("registered", f.election.registered()), ("unregistered", &f.unregistered)];
    for (section, votes) in sections {
        for (entry, (vote, mult)) in votes.entries().iter().enumerate() {
            let peaks = min_peaks(vote, &f.axis)?;
            worst = worst.max(peaks);
            match format {
                Format::Text => println!("{section} {entry} (x{mult}): min_peaks={peaks}"),
                Format::JsonLines => println!(
                    "{}",
                    serde_json::json!({"section": section, "entry": entry, "count": mult, "min_peaks": peaks})
                ),
            }
        }
    }
    let ok = worst <= k;
    match format {
        Format::Text => println!("min_peaks={worst} k={k} {}", if ok { "ok" } else { "exceeded" }),
        Format::JsonLines => println!(
            "{}",
            serde_json::json!({"min_peaks": worst, "k": k, "within_bound": ok})
        ),
    }
    Ok(ok)
}

fn label(expected: Option<bool>) -> &'static str {
    match expected {
        Some(true) => "expected=yes",
        Some(false) => "expected=no",
        None => "expected=unknown",
    }
}

fn reduce(kind: ReduceKind, input: &Path, k: Option<usize>, r: Option<usize>, literal: bool, out: Option<&Path>) -> Result<()> {
    let text = read(input)?;
    let need_k = || k.ok_or_else(|| Error::InvalidInput("--k is required for graph reductions".into()));
    let (inst, expected, notes) = match kind {
        ReduceKind::VisToAv2 => {
            let vis = parse_vis(&text)?;
            let o = reduce_vis_to_av2(&vis)?;
            let expected = brute_vis(&vis).ok().map(|w| w.is_some());
            (ControlInstance::Av(o.instance), expected, o.notes)
        }
        ReduceKind::Vc3ToDv2 => {
            let g = parse_graph(&text)?;
            let k = need_k()?;
            let o = reduce_vc3_to_dv2(&g, k, r.unwrap_or(3))?;
            let expected = brute_vc(&g, k).ok().map(|w| w.is_some());
            (ControlInstance::Dv(o.instance), expected, o.notes)
        }
        ReduceKind::Is3ToAv3 => {
            let g = parse_graph(&text)?;
            let k = need_k()?;
            let o = reduce_is3_to_av3(&g, k, r.unwrap_or(4))?;
            let expected = brute_is(&g, k).ok().map(|w| w.is_some());
            (ControlInstance::Av(o.instance), expected, o.notes)
        }
        ReduceKind::IsToDc3 => {
            let g = parse_graph(&text)?;
            let k = need_k()?;
            let o = if literal {
                reduce_is_to_dc3_literal(&g, k)?
            } else {
                reduce_is_to_dc3(&g, k)?
            };
            let expected = brute_is(&g, k).ok().map(|w| w.is_some());
            (ControlInstance::Dc(o.instance), expected, o.notes)
        }
    };
    let body = ElectionFile::from_instance(&inst).write();
    let mut sidecar = format!("{}\n", label(expected));
    for n in notes {
        sidecar.push_str(&format!("note={n}\n"));
    }
    match out {
        Some(path) => {
            write_out(path, &body)?;
            let mut lp = path.as_os_str().to_owned();
            lp.push(".label");
            write_out(Path::new(&lp), &sidecar)?;
        }
        None => {
            print!("{body}");
            eprint!("{sidecar}");
        }
    }
    Ok(())
}

fn gen(kind: GenKind) -> Result<String> {
    Ok(match kind {
        GenKind::Election {
            problem,
            m,
            r,
            k,
            registered,
            unregistered,
            budget,
            seed,
        } => {
            let shape = ElectionShape {
                m,
                r,
                k,
                registered,
                unregistered,
                budget,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let inst = match problem {
                ProblemArg::Av => ControlInstance::Av(random_av(&shape, &mut rng)?),
                ProblemArg::Dv => ControlInstance::Dv(random_dv(&shape, &mut rng)?),
                ProblemArg::Ac => ControlInstance::Ac(random_ac(&shape, &mut rng)?),
                ProblemArg::Dc => ControlInstance::Dc(random_dc(&shape, &mut rng)?),
            };
            ElectionFile::from_instance(&inst).write()
        }
        GenKind::Graph {
            n,
            max_degree,
            density,
            connected,
            seed,
        } => {
            if !(0.0..=1.0).contains(&density) {
                return Err(Error::InvalidInput(format!("density {density} is outside [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            write_graph(&random_graph(n, max_degree, density, connected, &mut rng))
        }
        GenKind::Mrsp {
            universe,
            r,
            sets,
            max_cap,
            target,
            seed,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            write_mrsp(&random_mrsp(universe, r, sets, max_cap.max(1), target, &mut rng)?)
        }
        GenKind::Vis { n, max_left, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            write_vis(&random_vis(n, max_left, &mut rng)?)
        }
    })
}

fn run_mrsp(file: &Path, algo: MrspAlgo, mode: MrspMode, cap: usize, out: &Output) -> Result<bool> {
    let inst = parse_mrsp(&read(file)?)?;
    let start = Instant::now();
    let (name, outcome) = match algo {
        MrspAlgo::Search => {
            let mode = match mode {
                MrspMode::Exhaustive => ExpandMode::Exhaustive,
                MrspMode::Pruning => ExpandMode::Pruning,
            };
            ("search", solve_mrsp_with(&inst, mode))
        }
        MrspAlgo::Brute => ("brute", brute_mrsp(&inst, cap)?),
    };
    let ms = elapsed_ms(start);
    let witness = outcome
        .witness
        .as_ref()
        .map(|idx| WitnessRecord::Sets(idx.iter().map(|&i| inst.sets()[i].clone()).collect()));
    let rec = ResultRecord {
        problem: "mrsp".into(),
        algorithm: name.into(),
        answer: answer(outcome.answer),
        budget_used: outcome.witness.as_ref().map_or(0, Vec::len),
        witness,
        nodes: outcome.stats.nodes,
        ms: out.timing.then_some(ms),
    };
    print!("{}", rec.render(out.format));
    Ok(outcome.answer)
}

fn interval_rep(path: &Path, raw: bool, format: Format) -> Result<bool> {
    let g = parse_graph(&read(path)?)?;
    let built = build_2interval_rep(&g)?;
    let (rep, violations) = if raw {
        let v = verify_claim(&g, &built);
        (built, v)
    } else {
        let padded = pad_to_lemma_form(&built, &g)?;
        let v = verify_rep(&g, &padded);
        (padded, v)
    };
    for u in 0..rep.num_vertices() {
        let ivs = rep.intervals(u);
        match format {
            Format::Text => {
                let parts: Vec<String> = ivs.iter().map(ToString::to_string).collect();
                println!("v {u}: {}", parts.join(" "));
            }
            Format::JsonLines => {
                let parts: Vec<[i64; 2]> = ivs.iter().map(|i| [i.left, i.right]).collect();
                println!("{}", serde_json::json!({"vertex": u, "intervals": parts}));
            }
        }
    }
    let ok = violations.is_empty();
    match format {
        Format::Text => {
            for v in &violations {
                println!("violation: {v}");
            }
            println!("verified: {}", if ok { "ok" } else { "failed" });
        }
        Format::JsonLines => {
            let vs: Vec<String> = violations.iter().map(ToString::to_string).collect();
            println!("{}", serde_json::json!({"verified": ok, "violations": vs}));
        }
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve {
            file,
            problem,
            algo,
            budget,
            k,
            max_r,
            cap,
            out,
        } => run_decision(load_instance(&file, problem, budget, k)?, algo, max_r, cap, &out),
        Command::Oracle {
            file,
            problem,
            budget,
            k,
            cap,
            out,
        } => run_decision(load_instance(&file, problem, budget, k)?, Algo::Brute, DEFAULT_MAX_R, cap, &out),
        Command::CheckKpeaked { file, k, format } => check_kpeaked(&file, k, format),
        Command::Reduce {
            kind,
            input,
            k,
            r,
            literal,
            out,
        } => reduce(kind, &input, k, r, literal, out.as_deref()).map(|_| true),
        Command::Gen { kind } => {
            print!("{}", gen(kind)?);
            Ok(true)
        }
        Command::Mrsp {
            file,
            algo,
            mode,
            cap,
            out,
        } => run_mrsp(&file, algo, mode, cap, &out),
        Command::IntervalRep { graph, raw, format } => interval_rep(&graph, raw, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
