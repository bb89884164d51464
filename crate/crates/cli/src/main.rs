//! `ag43`: command-line workbench for caps, demicaps and partitions of AG(4,3).
//!
//! Exit status: 0 success, 1 failed verification or runtime error, 2 usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use ag43_core::caps::{canonical_cap, enumerate_maximal_caps, hyperplane_profile, MaximalCap};
use ag43_core::demicaps::{
    corresponding_cap, corresponding_cap_of, decompositions, demicaps_in_cap, extend_four_alines, recognize_demicap,
    Demicap,
};
use ag43_core::gf3geom::{ALine, Point, PointSet};
use ag43_core::partitions::{
    build_grid36, classify, grid36, partition_pairing_type, pentad_structure, unique_partition, CapPartition,
};
use ag43_core::render::{ascii_partition, ascii_set, svg_partition, svg_set, Annotate};
use ag43_core::symmetry::{cap_stabilizer, grid_action, outer_automorphism_check, summarize, LinearMap};
use ag43_core::verify::verify_all;
use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ag43", version, about = "Caps, demicaps and maximal-cap partitions of AG(4,3)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Picture format for commands that draw the board.
    #[arg(long, global = true, value_enum, default_value_t = Format::Ascii)]
    format: Format,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Run every headline check and print a report.
    VerifyAll,
    /// Enumerate and analyze caps.
    #[command(subcommand)]
    Caps(CapsCmd),
    /// Demicaps and the caps they determine.
    #[command(subcommand)]
    Demicaps(DemicapsCmd),
    /// Disjoint partners and partitions into four caps.
    #[command(subcommand)]
    Partitions(PartitionsCmd),
    /// Stabilizers and their action on the grid.
    #[command(subcommand)]
    Symmetry(SymmetryCmd),
    /// Draw a point set or a partition on the 9×9 board.
    Render(RenderArgs),
    /// Start the HTTP analysis service.
    Serve {
        #[arg(long, default_value_t = 8043)]
        port: u16,
    },
}

#[derive(Subcommand)]
enum CapsCmd {
    /// List maximal caps with a given anchor in lexicographic order.
    Enumerate {
        #[arg(long, default_value = "0")]
        anchor: String,
        /// Stop after this many caps.
        #[arg(long)]
        limit: Option<usize>,
        /// Print only the number of caps.
        #[arg(long)]
        count: bool,
    },
    /// Cap, anchor and completion data for a point set.
    Analyze {
        #[arg(long)]
        points: String,
    },
}

#[derive(Subcommand)]
enum DemicapsCmd {
    /// The 72 demicaps of a maximal cap, or its 36 decompositions.
    List {
        #[arg(long)]
        cap: String,
        #[arg(long)]
        decompositions: bool,
    },
    /// The maximal cap corresponding to two complementary demicaps.
    Correspond {
        #[arg(long)]
        half_a: String,
        #[arg(long)]
        half_b: String,
    },
    /// The demicaps containing four a-lines, each named by one of its points.
    Extend {
        #[arg(long, default_value = "0")]
        anchor: String,
        #[arg(long)]
        through: String,
    },
}

#[derive(Subcommand)]
enum PartitionsCmd {
    /// Completability of every maximal cap disjoint from a cap.
    Classify {
        #[arg(long)]
        cap: String,
    },
    /// The partition determined by a decomposition of a cap.
    Unique {
        #[arg(long)]
        cap: String,
        #[arg(long)]
        half_a: Option<String>,
        #[arg(long)]
        half_b: Option<String>,
    },
    /// The 6×6 grid of 1-completable partners.
    Grid36 {
        #[arg(long)]
        cap: String,
    },
}

#[derive(Subcommand)]
enum SymmetryCmd {
    /// Linear maps fixing a maximal cap anchored at the origin.
    Stabilizer {
        #[arg(long)]
        cap: String,
    },
    /// How the stabilizer moves the rows and columns of the grid.
    GridAction {
        #[arg(long)]
        cap: String,
    },
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long, conflicts_with = "partition", required_unless_present = "partition")]
    points: Option<String>,
    /// Four blocks separated by `;`.
    #[arg(long)]
    partition: Option<String>,
    /// Show completion counts on non-members.
    #[arg(long)]
    counts: bool,
    /// Write to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A bad argument value; reported with exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(Usage(msg.into()).into())
}

fn parse_set(text: &str) -> anyhow::Result<PointSet> {
    match text.trim() {
        "canonical" => Ok(canonical_cap().points()),
        t => t.parse::<PointSet>().map_err(|e| Usage(format!("bad point list {t:?}: {e}")).into()),
    }
}

fn parse_point(text: &str) -> anyhow::Result<Point> {
    text.trim().parse::<Point>().map_err(|e| Usage(format!("bad point {text:?}: {e}")).into())
}

fn parse_cap(text: &str) -> anyhow::Result<MaximalCap> {
    MaximalCap::new(parse_set(text)?).map_err(|e| Usage(format!("not a maximal cap: {e}")).into())
}

fn parse_demicap(text: &str) -> anyhow::Result<Demicap> {
    recognize_demicap(parse_set(text)?).map_err(|e| Usage(format!("not a demicap: {e}")).into())
}

fn ids(s: PointSet) -> Vec<u8> {
    s.indices()
}

fn emit(global: &Global, value: Value, text: String) {
    if global.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
    } else {
        print!("{text}");
    }
}

fn draw_set(global: &Global, s: PointSet, annotate: Annotate) -> String {
    match global.format {
        Format::Ascii => ascii_set(s, annotate),
        Format::Svg => svg_set(s, annotate),
    }
}

fn draw_partition(global: &Global, p: &CapPartition) -> String {
    match global.format {
        Format::Ascii => ascii_partition(p),
        Format::Svg => svg_partition(p),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let g = &cli.global;
    if let Some(n) = g.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
    }
    match cli.command {
        Command::VerifyAll => {
            eprintln!("running checks (seed {})", g.seed);
            let report = verify_all(g.seed);
            emit(g, serde_json::to_value(&report)?, report.table());
            return Ok(if report.overall { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Caps(CapsCmd::Enumerate { anchor, limit, count }) => {
            let a = parse_point(&anchor)?;
            let caps = enumerate_maximal_caps(a).take(limit.unwrap_or(usize::MAX));
            if count {
                let n = caps.count();
                emit(g, json!({ "anchor": u8::from(a), "count": n }), format!("{n}\n"));
            } else {
                let caps: Vec<Vec<u8>> = caps.map(|c| ids(c.points())).collect();
                let text = caps.iter().map(|c| format!("{c:?}\n")).collect();
                emit(g, json!({ "anchor": u8::from(a), "caps": caps }), text);
            }
        }
        Command::Caps(CapsCmd::Analyze { points }) => {
            let s = parse_set(&points)?;
            let a = ag43_service::analysis(s);
            let mut text = draw_set(g, s, Annotate::Counts);
            if g.format == Format::Ascii {
                text.push_str(&format!(
                    "points {}  cap {}  complete {}  maximal {}  anchor {}  demicap {}\n",
                    a.points.len(),
                    a.is_cap,
                    a.is_complete,
                    a.is_maximal_cap,
                    a.anchor.map_or("-".into(), |x| x.to_string()),
                    a.demicap_anchor.map_or("no".into(), |x| format!("anchor {x}")),
                ));
                for l in &a.violations {
                    text.push_str(&format!("contains line {l:?}\n"));
                }
                if let Ok(c) = MaximalCap::new(s) {
                    let mut kinds: Vec<[u8; 3]> = hyperplane_profile(&c);
                    kinds.sort();
                    kinds.dedup();
                    text.push_str(&format!("hyperplane sections {kinds:?}\n"));
                }
            }
            emit(g, serde_json::to_value(&a)?, text);
        }
        Command::Demicaps(DemicapsCmd::List { cap, decompositions: decs }) => {
            let c = parse_cap(&cap)?;
            if decs {
                let rows: Vec<Value> = decompositions(&c)
                    .iter()
                    .map(|d| {
                        let img = corresponding_cap_of(d).expect("decompositions of a maximal cap correspond");
                        json!({
                            "cap": ids(c.points()),
                            "half_a": ids(d.half_a.points()),
                            "half_b": ids(d.half_b.points()),
                            "image_cap": ids(img.points()),
                        })
                    })
                    .collect();
                let text = rows.iter().map(|r| format!("{} | {} -> {}\n", r["half_a"], r["half_b"], r["image_cap"])).collect();
                emit(g, Value::Array(rows), text);
            } else {
                let ds: Vec<Vec<u8>> = demicaps_in_cap(&c).iter().map(|d| ids(d.points())).collect();
                let text = ds.iter().map(|d| format!("{d:?}\n")).collect();
                emit(g, json!({ "cap": ids(c.points()), "demicaps": ds }), text);
            }
        }
        Command::Demicaps(DemicapsCmd::Correspond { half_a, half_b }) => {
            let (a, b) = (parse_demicap(&half_a)?, parse_demicap(&half_b)?);
            let img = corresponding_cap(&a, &b).map_err(|e| Usage(e.to_string()))?;
            let mut text = format!("{:?}\n", ids(img.points()));
            if g.format == Format::Svg {
                text = svg_set(img.points(), Annotate::None);
            }
            emit(
                g,
                json!({
                    "cap": ids(a.points() | b.points()),
                    "half_a": ids(a.points()),
                    "half_b": ids(b.points()),
                    "image_cap": ids(img.points()),
                }),
                text,
            );
        }
        Command::Demicaps(DemicapsCmd::Extend { anchor, through }) => {
            let a = parse_point(&anchor)?;
            let pts: Vec<Point> = through.split(',').map(parse_point).collect::<anyhow::Result<_>>()?;
            let lines: Vec<ALine> =
                pts.iter().map(|&p| ALine::new(a, p).map_err(|e| Usage(e.to_string()))).collect::<Result<_, _>>()?;
            let lines: [ALine; 4] = lines.try_into().map_err(|_| Usage("give exactly four points".into()))?;
            let ds = extend_four_alines(&lines, a).map_err(|e| Usage(e.to_string()))?;
            let ds: Vec<Vec<u8>> = ds.iter().map(|d| ids(d.points())).collect();
            let text = ds.iter().map(|d| format!("{d:?}\n")).collect();
            emit(g, json!({ "anchor": u8::from(a), "demicaps": ds }), text);
        }
        Command::Partitions(PartitionsCmd::Classify { cap }) => {
            let c = parse_cap(&cap)?;
            eprintln!("classifying disjoint partners");
            let cls = classify(&c)?;
            let [one, two, six] = cls.counts();
            let partners: Vec<Value> =
                cls.partners.iter().map(|(p, k)| json!({ "cap": ids(p.points()), "k": k.k() })).collect();
            let text = format!("k  partners\n1  {one}\n2  {two}\n6  {six}\ntotal {}\n", cls.partners.len());
            emit(g, json!({ "counts": { "1": one, "2": two, "6": six }, "partners": partners }), text);
        }
        Command::Partitions(PartitionsCmd::Unique { cap, half_a, half_b }) => {
            let c = parse_cap(&cap)?;
            let (a, b) = match (half_a, half_b) {
                (Some(x), Some(y)) => (parse_demicap(&x)?, parse_demicap(&y)?),
                (None, None) => {
                    let d = decompositions(&c)[0];
                    (d.half_a, d.half_b)
                }
                _ => return usage("give both --half-a and --half-b, or neither"),
            };
            let up = unique_partition(&c, &a, &b).map_err(|e| Usage(e.to_string()))?;
            let kind = partition_pairing_type(&up.partition)?;
            let mut text = draw_partition(g, &up.partition);
            if g.format == Format::Ascii {
                text.push_str(&format!("pairing {:?}\n", kind.kind));
                for (name, b) in ["C", "C'", "M1", "M2"].iter().zip([c, up.c_prime, up.m1.cap, up.m2.cap]) {
                    text.push_str(&format!("{name:3} {:?}\n", ids(b.points())));
                }
            }
            emit(
                g,
                json!({
                    "anchor": u8::from(c.anchor()),
                    "c": ids(c.points()),
                    "c_prime": ids(up.c_prime.points()),
                    "m1": ids(up.m1.cap.points()),
                    "m2": ids(up.m2.cap.points()),
                    "s1": ids(up.s1),
                    "s2": ids(up.s2),
                    "pairing": format!("{:?}", kind.kind),
                }),
                text,
            );
        }
        Command::Partitions(PartitionsCmd::Grid36 { cap }) => {
            let c = parse_cap(&cap)?;
            let grid = grid36(&c)?;
            let ids_of: Vec<MaximalCap> = grid.cap_set().into_iter().collect();
            let id = |m: &MaximalCap| ids_of.binary_search(m).expect("grid cap");
            let mut text = String::from("cap ids (position in sorted order of the 36 caps)\n");
            for row in &grid.caps {
                text.push_str(&row.iter().map(|m| format!("{:3}", id(m))).collect::<Vec<_>>().join(" "));
                text.push('\n');
            }
            for (name, half) in [("rows", &grid.rows), ("cols", &grid.cols)] {
                let r = pentad_structure(half);
                text.push_str(&format!(
                    "{name}: {} a-lines, each in two: {}, pairwise one a-line: {}\n",
                    r.alines.len(),
                    r.each_aline_twice,
                    r.pairwise_one_aline
                ));
            }
            emit(g, ag43_service::grid_json(&grid), text);
        }
        Command::Symmetry(SymmetryCmd::Stabilizer { cap }) => {
            let c = parse_cap(&cap)?;
            let stab = cap_stabilizer(&c).map_err(|e| Usage(e.to_string()))?;
            let neg = stab.contains(&LinearMap::NEG_IDENTITY);
            let text = format!(
                "order {}\ncontains -I {neg}\nquotient by -I {}\n",
                stab.order(),
                stab.quotient_representatives().len()
            );
            emit(
                g,
                json!({
                    "order": stab.order(),
                    "contains_neg_identity": neg,
                    "quotient_order": stab.quotient_representatives().len(),
                }),
                text,
            );
        }
        Command::Symmetry(SymmetryCmd::GridAction { cap }) => {
            let c = parse_cap(&cap)?;
            let stab = cap_stabilizer(&c).map_err(|e| Usage(e.to_string()))?;
            let grid = build_grid36(&c)?;
            let actions = grid_action(&stab, &grid)?;
            let s = summarize(&actions);
            let report = outer_automorphism_check(&actions, &grid)?;
            let mut text = format!(
                "elements {}  non-swapping {}  swapping {}  row image order {}\nrow type      column type   count\n",
                s.elements, s.non_swapping, s.swapping, s.row_action_order
            );
            for (r, k, n) in &report.cycle_type_pairs {
                text.push_str(&format!("{:13} {:13} {n}\n", format!("{r:?}"), format!("{k:?}")));
            }
            text.push_str(&format!("isomorphism {}  not inner {}\n", report.isomorphism, report.not_inner));
            emit(
                g,
                json!({
                    "order": stab.order(),
                    "contains_neg_identity": stab.contains(&LinearMap::NEG_IDENTITY),
                    "row_action_order": s.row_action_order,
                    "non_swapping": s.non_swapping,
                    "swapping": s.swapping,
                    "cycle_type_pairs": report.cycle_type_pairs,
                }),
                text,
            );
        }
        Command::Render(args) => {
            let annotate = if args.counts { Annotate::Counts } else { Annotate::None };
            let text = match (&args.points, &args.partition) {
                (Some(p), _) => draw_set(g, parse_set(p)?, annotate),
                (None, Some(p)) => {
                    let blocks: Vec<MaximalCap> = p.split(';').map(parse_cap).collect::<anyhow::Result<_>>()?;
                    let blocks: [MaximalCap; 4] = blocks.try_into().map_err(|_| Usage("a partition has four blocks".into()))?;
                    let part = CapPartition::new(blocks[0].anchor(), blocks).map_err(|e| Usage(e.to_string()))?;
                    draw_partition(g, &part)
                }
                (None, None) => return usage("give --points or --partition"),
            };
            match args.output {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let (listener, addr) =
                    ag43_service::bind(port).await.with_context(|| format!("binding port {port}"))?;
                println!("listening on http://{addr}");
                ag43_service::serve(listener).await.context("serving")
            })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
