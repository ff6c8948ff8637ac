//! Command-line front end. Every command parses its inputs, calls one
//! library operation and prints the result; exit codes are 0 on success,
//! 1 for usage or validation errors, 2 when a budget is exceeded and 3 when
//! a split fails verification.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::axioms::instantiate_axioms;
use crate::error::{Error, Result};
use crate::forms::{enumerate_degree0, NormalForm};
use crate::io::{
    parse_forms, structure_to_dot, to_json, witness_to_dot, FormRecord, FormSetRecord, ModelRecord, SplitRecord,
    WitnessRecord,
};
use crate::oracle::{oracle_find, SearchSpace};
use crate::params::{Params, Variant};
use crate::rewriter::{decide_equation, decide_zero_forms, rewrite, DEFAULT_BUDGET};
use crate::splitter::{nonatomicity_report, split_atom};
use crate::term::parse_term;
use crate::witness::{is_satisfiable, is_satisfiable_with, WitnessOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cylindric", version, about = "Normal forms, witnesses and atom splitting for NCA_n / WCA_n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Dimension (at least 2).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Number of free variables.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Target class: nca or wca.
    #[arg(long, default_value = "nca")]
    pub variant: Variant,
    /// Maximum number of forms to enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Write the main result as JSON to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn params(&self) -> Result<Params> {
        Params::new(self.n, self.m, self.variant)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List all degree-0 normal forms.
    Forms {
        #[command(flatten)]
        common: Common,
    },
    /// Decide satisfiability of the form in a form file.
    Sat {
        #[command(flatten)]
        common: Common,
        /// JSON file holding one normal form.
        #[arg(long)]
        form: PathBuf,
        /// Write the witness graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build and print the witness structure of a form.
    Witness {
        #[command(flatten)]
        common: Common,
        /// JSON file holding one normal form.
        #[arg(long)]
        form: PathBuf,
        /// Write the witness graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Keep children that the diagonal filter would omit.
        #[arg(long)]
        no_filter: bool,
    },
    /// Rewrite a term into the set of normal forms below it.
    Rewrite {
        #[command(flatten)]
        common: Common,
        /// Term to rewrite, e.g. "x0 * -d0 1".
        term: String,
    },
    /// Decide an equation between two terms, or whether a form file sums to zero.
    Decide {
        #[command(flatten)]
        common: Common,
        /// Form or form-set file to test against zero instead of an equation.
        #[arg(long, conflicts_with_all = ["lhs", "rhs"])]
        forms: Option<PathBuf>,
        /// Left-hand side term.
        #[arg(required_unless_present = "forms")]
        lhs: Option<String>,
        /// Right-hand side term.
        #[arg(required_unless_present = "forms")]
        rhs: Option<String>,
    },
    /// Split a satisfiable form below t into two disjoint satisfiable forms.
    Split {
        #[command(flatten)]
        common: Common,
        /// JSON file holding one normal form.
        #[arg(long)]
        form: PathBuf,
        /// Write the extended structure in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Split all degree-0 forms below t and a sample of higher-degree ones.
    Report {
        #[command(flatten)]
        common: Common,
        /// Highest sampled degree.
        #[arg(long, default_value_t = 1)]
        degree: usize,
        /// Forms sampled per degree.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Seed for sampling higher-degree forms.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print every instantiated axiom of the class.
    Axioms {
        #[command(flatten)]
        common: Common,
    },
    /// Search small structures for a model of a form.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// JSON file holding one normal form.
        #[arg(long)]
        form: PathBuf,
        /// Largest structure size to try.
        #[arg(long, default_value_t = 4)]
        max_nodes: usize,
        /// Write the model found in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::FormBudget { .. } | Error::Budget(_) => EXIT_BUDGET,
        Error::Verification(_) => EXIT_VERIFICATION,
        _ => EXIT_USAGE,
    }
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn write_file(path: &Option<PathBuf>, contents: &str) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, contents)?;
    }
    Ok(())
}

fn single_form(path: &Path, p: &Params) -> Result<NormalForm> {
    let set = parse_forms(&read(path)?, p)?;
    match set.len() {
        1 => Ok(set.iter().next().expect("one member").clone()),
        k => Err(Error::InvalidForm(format!("expected a single form, found {k}"))),
    }
}

/// Runs one command, writing results to `out`.
pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Forms { common } => {
            let p = common.params()?;
            let forms = enumerate_degree0(&p, common.budget)?;
            for f in &forms {
                writeln!(out, "{f}")?;
            }
            let set = crate::rewriter::FormSet::new(0, forms)?;
            write_file(&common.out, &to_json(&FormSetRecord::from_set(&set))?)?;
        }
        Command::Sat { common, form, dot } => {
            let p = common.params()?;
            let r = is_satisfiable(&single_form(form, &p)?, &p)?;
            writeln!(out, "{}", r.summary())?;
            write_file(&common.out, &to_json(&WitnessRecord::from_witness(&r.witness))?)?;
            write_file(dot, &witness_to_dot(&r.witness))?;
        }
        Command::Witness { common, form, dot, no_filter } => {
            let p = common.params()?;
            let options = WitnessOptions { diagonal_filter: !no_filter, ..Default::default() };
            let w = is_satisfiable_with(&single_form(form, &p)?, &p, options)?.witness;
            let json = to_json(&WitnessRecord::from_witness(&w))?;
            writeln!(out, "{json}")?;
            write_file(&common.out, &json)?;
            write_file(dot, &witness_to_dot(&w))?;
        }
        Command::Rewrite { common, term } => {
            let p = common.params()?;
            let set = rewrite(&parse_term(term, &p)?, &p, common.budget)?;
            let json = to_json(&FormSetRecord::from_set(&set))?;
            writeln!(out, "{json}")?;
            write_file(&common.out, &json)?;
        }
        Command::Decide { common, forms, lhs, rhs } => {
            let p = common.params()?;
            if let Some(path) = forms {
                let set = parse_forms(&read(path)?, &p)?;
                let zero = decide_zero_forms(&set, &p)?;
                writeln!(out, "{}", if zero { "zero" } else { "nonzero" })?;
            } else {
                let (Some(lhs), Some(rhs)) = (lhs, rhs) else {
                    return Err(Error::Params("decide needs two terms or --forms".into()));
                };
                let equal = decide_equation(&parse_term(lhs, &p)?, &parse_term(rhs, &p)?, &p, common.budget)?;
                writeln!(out, "{}", if equal { "equal" } else { "not equal" })?;
            }
        }
        Command::Split { common, form, dot } => {
            let p = common.params()?;
            let r = split_atom(&single_form(form, &p)?, &p)?;
            writeln!(out, "tau:   {}", r.tau)?;
            writeln!(out, "sigma: {}", r.sigma)?;
            writeln!(out, "gamma: {}", r.gamma)?;
            writeln!(out, "verified: sigma != gamma, both below tau, both realized")?;
            write_file(&common.out, &to_json(&SplitRecord::from_split(&r))?)?;
            write_file(dot, &structure_to_dot(&r.extended.structure, Some(&r.extended.valuation)))?;
        }
        Command::Report { common, degree, samples, seed } => {
            let p = common.params()?;
            let report = nonatomicity_report(&p, *degree, *samples, *seed)?;
            for entry in &report.entries {
                match &entry.outcome {
                    Ok(_) => writeln!(out, "verified  degree {} {}", entry.tau.degree(), entry.tau)?,
                    Err(e) => writeln!(out, "FAILED    degree {} {}: {e}", entry.tau.degree(), entry.tau)?,
                }
            }
            writeln!(out, "{}/{} splits verified ({p})", report.verified(), report.attempted())?;
            if let Some(path) = &common.out {
                let records: Vec<serde_json::Value> = report
                    .entries
                    .iter()
                    .map(|e| match &e.outcome {
                        Ok((sigma, gamma)) => serde_json::json!({
                            "tau": FormRecord::from_form(&e.tau),
                            "sigma": FormRecord::from_form(sigma),
                            "gamma": FormRecord::from_form(gamma),
                        }),
                        Err(msg) => serde_json::json!({ "tau": FormRecord::from_form(&e.tau), "error": msg }),
                    })
                    .collect();
                fs::write(path, serde_json::to_string_pretty(&records)?)?;
            }
            if !report.all_verified() {
                return Ok(EXIT_VERIFICATION);
            }
        }
        Command::Axioms { common } => {
            let p = common.params()?;
            for ax in instantiate_axioms(&p) {
                writeln!(out, "{ax}")?;
            }
        }
        Command::Oracle { common, form, max_nodes, dot } => {
            let p = common.params()?;
            let f = single_form(form, &p)?;
            match oracle_find(&f, &SearchSpace::new(p, *max_nodes))? {
                Some((s, e, v)) => {
                    writeln!(out, "satisfiable: realized at {} in a structure with {} nodes", s.name(v), s.len())?;
                    write_file(&common.out, &to_json(&ModelRecord::new(&s, &e, v))?)?;
                    write_file(dot, &structure_to_dot(&s, Some(&e)))?;
                }
                None => writeln!(out, "no model with at most {max_nodes} nodes")?,
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            // a missing subcommand prints help but is still a usage error
            let usage = e.use_stderr() || e.kind() == clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand;
            return if usage { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        // a closed pipe on stdout (e.g. `| head`) is not a failure
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
