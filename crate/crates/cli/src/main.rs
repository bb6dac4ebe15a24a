use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use synchrolab::catalog::{self, CatalogEntry};
use synchrolab::experiments::{self, Budget, ScanOptions, VerifyOptions};
use synchrolab::report::{self, Format};
use synchrolab::semigroup::{self, DEFAULT_CLOSURE_CAP};
use synchrolab::sync;
use synchrolab::{KernelType, Transformation};

#[derive(Parser)]
#[command(name = "synchrolab", version, about = "Synchronization of transformations by permutation groups")]
struct Cli {
    /// Closure size cap for the brute-force oracle.
    #[arg(long, global = true, env = "SYNCHROLAB_CAP", default_value_t = DEFAULT_CLOSURE_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List or show catalog groups.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Decide whether the group synchronizes a map.
    Check {
        #[command(flatten)]
        instance: Instance,
        /// Write Gr in DOT format to this path.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        /// Print the synchronizing word.
        #[arg(long)]
        word: bool,
    },
    /// Print a synchronizing word.
    Word {
        #[command(flatten)]
        instance: Instance,
    },
    /// Print the graph Gr of the semigroup.
    Gr {
        #[command(flatten)]
        instance: Instance,
        /// dot, matrix or edges.
        #[arg(long, default_value = "dot")]
        format: String,
    },
    /// Run a theorem-verification sweep.
    Verify {
        id: String,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, default_value = "table")]
        format: Format,
        #[arg(long, default_value_t = 1800)]
        budget_secs: u64,
        #[arg(long)]
        max_instances: Option<u64>,
        /// Include wall time in the output.
        #[arg(long)]
        timings: bool,
    },
    /// Part counts of G-regular partitions and the depth.
    Depth {
        #[command(flatten)]
        group: GroupSource,
        /// Also search non-uniform partitions.
        #[arg(long)]
        allow_nonuniform: bool,
    },
    /// Sweep catalog groups and list non-synchronized maps.
    Scan {
        #[arg(long, default_value_t = 8)]
        max_degree: usize,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        rank: Option<usize>,
        /// For example 3,3,3.
        #[arg(long)]
        kernel_type: Option<KernelType>,
        #[arg(long)]
        include_imprimitive: bool,
        #[arg(long, default_value = "table")]
        format: Format,
        #[arg(long, default_value_t = 1800)]
        budget_secs: u64,
    },
    /// Enumerate the semigroup generated by the group and a map.
    Closure {
        #[command(flatten)]
        instance: Instance,
        /// Print every element, one per line, in discovery order.
        #[arg(long)]
        dump: bool,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List {
        #[arg(long, default_value_t = 10)]
        max_degree: usize,
    },
    Show {
        name: String,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GroupSource {
    /// Group file: `degree N` then one generator per line.
    #[arg(long)]
    group: Option<PathBuf>,
    /// Catalog name such as S5, C6, grid-3 or PGL(2,5).
    #[arg(long)]
    catalog: Option<String>,
}

impl GroupSource {
    fn load(&self) -> Result<CatalogEntry> {
        if let Some(path) = &self.group {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(catalog::parse_group_file(&text)?)
        } else {
            let name = self.catalog.as_deref().expect("clap requires a source");
            Ok(catalog::entry(name)?)
        }
    }
}

#[derive(Args)]
struct Instance {
    #[command(flatten)]
    group: GroupSource,
    /// The map as a 1-based image list, for example "[1,1,3,4]".
    #[arg(long)]
    map: String,
}

impl Instance {
    fn load(&self) -> Result<(CatalogEntry, Transformation)> {
        let entry = self.group.load()?;
        let f = Transformation::parse(&self.map, Some(entry.degree()))?;
        Ok((entry, f))
    }
}

fn main() -> ExitCode {
    // Exit quietly when stdout is closed early, as with `| head`.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let cap = cli.cap;
    match cli.command {
        Command::Catalog { action } => catalog_cmd(action),
        Command::Check { instance, emit_dot, word } => check(&instance, emit_dot, word),
        Command::Word { instance } => {
            let (entry, f) = instance.load()?;
            match sync::synchronizing_word(&entry.group, &f) {
                Ok(w) => {
                    println!("{}", w.word);
                    println!("length {}  (n-1)^2 = {}", w.length, w.cerny_bound);
                    Ok(0)
                }
                Err(synchrolab::Error::NotSynchronizing) => {
                    println!("not synchronized: no word exists");
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Gr { instance, format } => {
            let (entry, f) = instance.load()?;
            let gr = sync::gr_graph(&entry.group, &f)?;
            match format.as_str() {
                "dot" => print!("{}", gr.to_dot("Gr")),
                "matrix" => print!("{}", gr.to_matrix_text()),
                "edges" => {
                    for (v, w) in gr.edges() {
                        println!("{} {}", v + 1, w + 1);
                    }
                }
                other => bail!("unknown graph format {other:?}"),
            }
            Ok(0)
        }
        Command::Verify { id, max_degree, format, budget_secs, max_instances, timings } => {
            let options = VerifyOptions {
                max_degree: max_degree.unwrap_or_else(|| experiments::default_max_degree(&id)),
                budget: Budget {
                    wall: Duration::from_secs(budget_secs),
                    max_instances: max_instances.unwrap_or(u64::MAX),
                },
                closure_cap: cap,
            };
            let r = experiments::verify_theorem(&id, &options)?;
            print!("{}", report::emit(&r, format, timings));
            Ok(r.status.exit_code() as u8)
        }
        Command::Depth { group, allow_nonuniform } => depth(&group, allow_nonuniform),
        Command::Scan { max_degree, degree, rank, kernel_type, include_imprimitive, format, budget_secs } => {
            let options = ScanOptions {
                max_degree,
                degree,
                rank,
                kernel_type,
                include_imprimitive,
                budget: Budget {
                    wall: Duration::from_secs(budget_secs),
                    max_instances: u64::MAX,
                },
            };
            let r = experiments::scan(&options)?;
            print!("{}", report::emit(&r, format, false));
            Ok(r.status.exit_code() as u8)
        }
        Command::Closure { instance, dump } => {
            let (entry, f) = instance.load()?;
            let c = semigroup::group_closure(&entry.group, &f, cap)?;
            if dump {
                print!("{}", c.dump());
                return Ok(0);
            }
            println!("elements {}", c.len());
            if c.truncated() {
                println!("truncated at cap {cap}");
                return Ok(2);
            }
            let spectrum: Vec<String> = c.rank_spectrum()?.iter().map(|r| r.to_string()).collect();
            println!("min rank {}", c.min_rank()?);
            println!("ranks {}", spectrum.join(" "));
            Ok(0)
        }
    }
}

fn catalog_cmd(action: CatalogAction) -> Result<u8> {
    match action {
        CatalogAction::List { max_degree } => {
            for e in catalog::build_catalog(max_degree)? {
                println!("{}", e.summary());
            }
        }
        CatalogAction::Show { name } => {
            let e = catalog::entry(&name)?;
            println!("# {}", e.summary());
            print!("{}", e.to_group_file()?);
        }
    }
    Ok(0)
}

fn check(instance: &Instance, emit_dot: Option<PathBuf>, word: bool) -> Result<u8> {
    let (entry, f) = instance.load()?;
    let v = sync::synchronizes(&entry.group, &f)?;
    if v.permutation_input {
        eprintln!("warning: the map is a permutation, so the semigroup is a group");
    }
    if v.synchronizes {
        println!("{} synchronizes {}", entry.name, f);
    } else {
        println!(
            "{} does not synchronize {}: minimum rank {}, Gr has {} edges",
            entry.name,
            f,
            v.min_rank_bound,
            v.gr.edge_count()
        );
    }
    if word {
        match &v.witness_word {
            Some(w) => println!("word: {w}"),
            None => println!("word: none"),
        }
    }
    if let Some(path) = emit_dot {
        std::fs::write(&path, v.gr.to_dot("Gr")).with_context(|| format!("writing {}", path.display()))?;
    }
    let record = json!({
        "group": entry.name,
        "degree": entry.degree(),
        "map": f.to_string(),
        "kernel_type": f.kernel_type().to_string(),
        "synchronizes": v.synchronizes,
        "min_rank": if v.synchronizes { 1 } else { v.min_rank_bound },
        "word_length": v.witness_word.as_ref().map(|w| w.len()),
        "gr_edges": v.gr.edge_count(),
    });
    println!("{record}");
    Ok(0)
}

fn depth(source: &GroupSource, allow_nonuniform: bool) -> Result<u8> {
    let entry = source.load()?;
    let show = |label: &str, nonuniform: bool| -> Result<()> {
        let r = semigroup::regular_partition_sizes(&entry.group, nonuniform)?;
        let sizes: Vec<String> = r.sizes.iter().map(|s| s.to_string()).collect();
        let depth = r.depth().map_or("infinite".to_string(), |d| d.to_string());
        println!("{label} sizes [{}]  depth {depth}", sizes.join(", "));
        for w in &r.witnesses {
            println!("  {} parts: {}  section {}", w.partition.len(), w.partition, w.section);
        }
        Ok(())
    };
    show("uniform", false)?;
    if allow_nonuniform {
        show("all", true)?;
    }
    Ok(0)
}
