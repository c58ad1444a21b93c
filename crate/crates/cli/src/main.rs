mod inputs;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use rqn::catalog::{Catalog, Entry, FixtureOutcome, SCHEMA};
use rqn::cochains::{cohomology_dims, CochainDoc};
use rqn::double::{assemble_j, build_double, check_gc_conditions, check_j_algebraic, check_mybe, DoubleError};
use rqn::equivalence::{equivalence_constraints, sample_search, verify_equivalence, AutoFamilyDoc, PhiAction};
use rqn::exact_arith::Poly;
use rqn::lie_core::LieAlgebraDoc;
use rqn::structures::{verify_rqn, ConditionEntry, VerificationReport};

use inputs::InputError;

#[derive(Parser)]
#[command(name = "rqn", version, about = "Exact verification of r-qn structures on Lie algebras")]
struct Cli {
    /// Emit key-sorted JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// How automorphisms act on the 3-form.
    #[arg(long, global = true, default_value_t = PhiAction::FifthStep)]
    phi_action: PhiAction,
    /// Seed for every sampling step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for batch runs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the six defining conditions of an r-qn structure.
    Verify {
        #[arg(long)]
        structure: PathBuf,
        /// Catalog name or algebra JSON file; overrides the structure's own algebra.
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Run the built-in fixtures.
    Tables(Selection),
    /// Double Lie algebra and block maps on it.
    Double {
        #[command(subcommand)]
        command: DoubleCommand,
    },
    /// Equivalence of structures under an automorphism family.
    Equiv {
        #[command(subcommand)]
        command: EquivCommand,
    },
    /// Dimensions of cochains, cocycles and coboundaries in one degree.
    Cohomology {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        k: usize,
    },
    /// Inspect and run the built-in registry.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Args)]
struct Selection {
    #[arg(long, conflicts_with = "id")]
    all: bool,
    #[arg(long)]
    id: Vec<String>,
}

#[derive(Subcommand)]
enum DoubleCommand {
    /// Bracket table of the double for an r-matrix.
    Build {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        r: PathBuf,
    },
    /// Modified Yang-Baxter equation for a map J on the double.
    Mybe {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        r: PathBuf,
        #[arg(long)]
        j: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// Assemble J from (r, n, θ) and check the gc conditions.
    Gc {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        theta: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        algebra: Option<String>,
    },
}

#[derive(Args)]
struct Pair {
    /// Catalog name or family JSON file.
    #[arg(long)]
    family: String,
    #[arg(long)]
    s: PathBuf,
    #[arg(long)]
    s2: PathBuf,
}

#[derive(Subcommand)]
enum EquivCommand {
    /// Check that a witness maps s onto s2.
    Check {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Polynomial constraints on the family parameters.
    Constraints {
        #[command(flatten)]
        pair: Pair,
    },
    /// Seeded search for a witness.
    Search {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    List,
    /// Print one algebra, family or fixture.
    Get {
        name: String,
    },
    Run(Selection),
}

/// A finished command: verdict plus both renderings.
struct Report {
    pass: bool,
    json: Value,
    text: String,
}

/// What one invocation prints and returns.
struct Invocation {
    code: u8,
    stdout: String,
    stderr: String,
}

fn main() -> ExitCode {
    let out = invoke(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}

/// Exit codes: 0 all checks pass, 1 a mathematical check fails, 2 bad input.
fn invoke<I, T>(args: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { 2 } else { 0 };
            return if e.use_stderr() {
                Invocation { code, stdout: String::new(), stderr: text }
            } else {
                Invocation { code, stdout: text, stderr: String::new() }
            };
        }
    };
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return Invocation { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") };
        }
    }
    match run(&cli) {
        Ok(r) => {
            let stdout = if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&r.json).expect("serializable"))
            } else {
                r.text
            };
            Invocation { code: if r.pass { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(e) => Invocation { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    let cat = Catalog::builtin();
    match &cli.command {
        Command::Verify { structure, algebra } => {
            let s = inputs::structure(cat, structure, algebra.as_deref())?;
            Ok(report_of(&verify_rqn(&s)))
        }
        Command::Tables(sel) => run_fixtures(cat, sel),
        Command::Double { command } => run_double(cat, command),
        Command::Equiv { command } => run_equiv(cat, command, cli.phi_action, cli.seed),
        Command::Cohomology { algebra, k } => {
            let l = inputs::algebra(cat, algebra)?;
            let d = cohomology_dims(&l, *k)?;
            let text = format!(
                "{} degree {}: cochains {}, cocycles {}, coboundaries {}, betti {}\n",
                l.name(),
                d.degree,
                d.cochains,
                d.cocycles,
                d.coboundaries,
                d.betti
            );
            Ok(Report { pass: true, json: serde_json::to_value(&d).expect("serializable"), text })
        }
        Command::Catalog { command } => match command {
            CatalogCommand::List => {
                let (algebras, families, fixtures) = cat.list();
                let text = format!(
                    "algebras: {}\nfamilies: {}\nfixtures: {}\n",
                    algebras.join(" "),
                    families.join(" "),
                    fixtures.join(" ")
                );
                Ok(Report {
                    pass: true,
                    json: json!({ "algebras": algebras, "families": families, "fixtures": fixtures }),
                    text,
                })
            }
            CatalogCommand::Get { name } => {
                let v = match cat.get(name)? {
                    Entry::Algebra(l) => json!({ "algebra": LieAlgebraDoc::from_algebra(l) }),
                    Entry::Family(f) => json!({ "family": AutoFamilyDoc::from_family(f) }),
                    Entry::Fixture(f) => json!({ "fixture": f }),
                };
                let text = format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"));
                Ok(Report { pass: true, json: v, text })
            }
            CatalogCommand::Run(sel) => run_fixtures(cat, sel),
        },
    }
}

fn report_of(r: &VerificationReport<Poly>) -> Report {
    Report { pass: r.pass, json: r.to_json(), text: render::report(r) }
}

fn entry_report(e: &ConditionEntry<Poly>) -> Report {
    report_of(&VerificationReport::new(vec![e.clone()]))
}

fn run_fixtures(cat: &Catalog, sel: &Selection) -> Result<Report, InputError> {
    let ids: Vec<String> = if sel.all {
        cat.fixtures().iter().map(|f| f.id.clone()).collect()
    } else if sel.id.is_empty() {
        return Err(InputError::Usage("give --all or at least one --id".into()));
    } else {
        sel.id.clone()
    };
    let outcomes = ids.par_iter().map(|id| cat.run_fixture(id)).collect::<Result<Vec<FixtureOutcome>, _>>()?;
    let discrepancies: Vec<&str> = outcomes.iter().filter(|o| !o.matches_expected()).map(|o| o.id.as_str()).collect();
    let pass = discrepancies.is_empty();
    let json = json!({
        "schema": SCHEMA,
        "fixtures": outcomes.iter().map(FixtureOutcome::to_json).collect::<Vec<_>>(),
        "summary": {
            "total": outcomes.len(),
            "reproduced": outcomes.len() - discrepancies.len(),
            "discrepancies": discrepancies,
        },
        "pass": pass,
    });
    Ok(Report { pass, json, text: render::fixtures(&outcomes) })
}

fn run_double(cat: &Catalog, cmd: &DoubleCommand) -> Result<Report, InputError> {
    match cmd {
        DoubleCommand::Build { algebra, r } => {
            let l = inputs::algebra(cat, algebra)?;
            let r = inputs::bivector(r, l.dim())?;
            match build_double(&l, &r) {
                Ok(d) => {
                    let doc = LieAlgebraDoc::from_algebra(&d.algebra);
                    let mut text = format!("double of {} (dimension {})\n", l.name(), d.dim());
                    for b in &doc.brackets {
                        text.push_str(&format!("[e{},e{}] += ({}) e{}\n", b.i, b.j, b.c, b.k));
                    }
                    Ok(Report { pass: true, json: json!({ "pass": true, "double": doc }), text })
                }
                Err(DoubleError::NotAnRMatrix) => Ok(Report {
                    pass: false,
                    json: json!({ "pass": false, "error": "not an r-matrix" }),
                    text: "FAIL r does not satisfy the classical Yang-Baxter equation\n".into(),
                }),
                Err(e) => Err(e.into()),
            }
        }
        DoubleCommand::Mybe { algebra, r, j, k } => {
            let l = inputs::algebra(cat, algebra)?;
            let r = inputs::bivector(r, l.dim())?;
            let j = inputs::j_matrix(j, 2 * l.dim())?;
            let k = inputs::poly(k)?;
            let d = build_double(&l, &r)?;
            Ok(entry_report(&check_mybe(&d, &j, &k)))
        }
        DoubleCommand::Gc { structure, theta, k, algebra } => {
            let s = inputs::structure(cat, structure, algebra.as_deref())?;
            let d = s.algebra.dim();
            let theta = match theta {
                Some(p) => inputs::two_form(p, d)?,
                None => rqn::cochains::KCochain::zero(d, 2),
            };
            let k = inputs::poly(k)?;
            let j = assemble_j(&s.n, &s.r, &theta)?.j;
            let mut entries = vec![check_gc_conditions(&s.r, &s.n, &theta, &k)];
            entries.extend(check_j_algebraic(&j, &k).entries);
            let rep = VerificationReport::new(entries);
            let mut out = report_of(&rep);
            let rows = render::matrix_rows(&j);
            out.json["j"] = json!(rows);
            out.json["theta"] = serde_json::to_value(CochainDoc::from_cochain(&theta)).expect("serializable");
            out.text.push_str("J =\n");
            for r in rows {
                out.text.push_str(&format!("  [{}]\n", r.join(", ")));
            }
            Ok(out)
        }
    }
}

fn run_equiv(cat: &Catalog, cmd: &EquivCommand, action: PhiAction, seed: u64) -> Result<Report, InputError> {
    let pair = match cmd {
        EquivCommand::Check { pair, .. } | EquivCommand::Constraints { pair } | EquivCommand::Search { pair, .. } => {
            pair
        }
    };
    let f = inputs::family(cat, &pair.family)?;
    let s = inputs::structure(cat, &pair.s, Some(&f.algebra))?;
    let s2 = inputs::structure(cat, &pair.s2, Some(&f.algebra))?;
    match cmd {
        EquivCommand::Check { witness, .. } => {
            let w = inputs::witness(witness, &f.name)?;
            let ok = verify_equivalence(&f, &w, &s, &s2, action)?;
            let text = format!("{} witness under {action} action\n", if ok { "PASS" } else { "FAIL" });
            Ok(Report { pass: ok, json: json!({ "pass": ok, "phi_action": action, "witness": w.to_json() }), text })
        }
        EquivCommand::Constraints { .. } => {
            let cs = equivalence_constraints(&f, &s, &s2, action)?;
            let strs: Vec<String> = cs.iter().map(ToString::to_string).collect();
            let text = strs.iter().map(|c| format!("{c} = 0\n")).collect::<String>();
            Ok(Report { pass: true, json: json!({ "phi_action": action, "constraints": strs }), text })
        }
        EquivCommand::Search { budget, .. } => {
            let found = sample_search(&f, &s, &s2, action, *budget, seed);
            let (pass, witness, text) = match &found {
                Some(w) => (true, w.to_json(), format!("found {}\n", render::assignment(w))),
                None => (false, Value::Null, format!("no witness within {budget} attempts (seed {seed})\n")),
            };
            Ok(Report {
                pass,
                json: json!({ "phi_action": action, "seed": seed, "budget": budget, "witness": witness }),
                text,
            })
        }
    }
}
