//! Command-line front end. Reports go to the `out` writer, diagnostics to
//! `err`; the return value is the process exit status.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::classify::classify_aut;
use crate::counting::count_table;
use crate::error::Error;
use crate::germfile::{parse_germ, ParseError};
use crate::hypersurface::{levi_sign, model_symmetries, remove_harmonics, Germ, HarmonicOutcome};
use crate::normalform::{equivalent, normalize, NormalFormReport, Verdict};
use crate::par;
use crate::series::{HoloSeries2, RealSeries3};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "crnormal", version, about = "Exact normal forms of real hypersurface germs in C^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sign and value of the Levi form.
    Levi { files: Vec<PathBuf> },
    /// Type of the point, searched up to `--max-order`.
    Type {
        files: Vec<PathBuf>,
        #[arg(long)]
        max_order: u32,
    },
    /// Model polynomial, essential type, class and linear symmetries.
    Model { files: Vec<PathBuf> },
    /// Normal form with the normalizing map and condition certificates.
    Normalize {
        files: Vec<PathBuf>,
        #[arg(long)]
        order: u32,
    },
    /// Stability group classification and jet determination order.
    Classify {
        files: Vec<PathBuf>,
        #[arg(long)]
        order: u32,
    },
    /// Formal equivalence of two germs up to `--order`.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        order: u32,
    },
    /// Coefficient counts of the contact-matching problem.
    Count {
        #[arg(long)]
        max_n: u64,
    },
}

/// Failure of one command, mapped to an exit status.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Domain(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Domain(_) => EXIT_DOMAIN,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Input(s) => s.clone(),
            Failure::Domain(e) => e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

pub fn read_germ(path: &PathBuf) -> std::result::Result<Germ, Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("ParseError in {}: {e}", path.display())))?;
    parse_germ(&src).map_err(|e: ParseError| Failure::Input(format!("{}: {e}", path.display())))
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_INPUT };
        }
    };
    let results: Vec<(Option<String>, Outcome)> = match cli.command {
        Command::Levi { files } => batch(&files, |g| Ok(levi_report(g))),
        Command::Type { files, max_order } => batch(&files, |g| type_report(g, max_order)),
        Command::Model { files } => batch(&files, model_report),
        Command::Normalize { files, order } => {
            batch(&files, |g| Ok(normal_form_report(&normalize(g, order)?)))
        }
        Command::Classify { files, order } => batch(&files, |g| classify_report(g, order)),
        Command::Equiv { first, second, order } => vec![(None, equiv_report(&first, &second, order))],
        Command::Count { max_n } => vec![(None, count_report(max_n))],
    };
    let many = results.len() > 1;
    let mut code = EXIT_OK;
    for (name, res) in results {
        if many {
            if let Some(name) = &name {
                let _ = writeln!(out, "== {name}");
            }
        }
        match res {
            Ok(text) => {
                let _ = write!(out, "{text}");
            }
            Err(f) => {
                let _ = writeln!(err, "{}", f.message());
                code = code.max(f.exit_code());
            }
        }
    }
    code
}

/// Processes every file independently; results keep the input order.
fn batch<F>(files: &[PathBuf], f: F) -> Vec<(Option<String>, Outcome)>
where
    F: Fn(&Germ) -> Outcome + Sync + Send,
{
    if files.is_empty() {
        return vec![(None, Err(Failure::Input("ParseError: no input file given".into())))];
    }
    par::map(files, |path| {
        let res = read_germ(path).and_then(|g| f(&g));
        (Some(path.display().to_string()), res)
    })
}

fn levi_report(g: &Germ) -> String {
    let (sign, value) = levi_sign(g);
    let sign = match sign {
        1 => "+1",
        -1 => "-1",
        _ => "0",
    };
    format!("{sign}\nvalue = {}\n", crate::gq::fmt_rational(&value))
}

fn type_report(g: &Germ, max_order: u32) -> Outcome {
    let max_order = max_order.min(g.source_trunc());
    Ok(match remove_harmonics(g, max_order)? {
        HarmonicOutcome::Finite(h) => format!("type = {}\n", h.k),
        HarmonicOutcome::InfiniteTypeWithinTruncation { checked_to } => {
            format!("infinite type within order {checked_to}\n")
        }
    })
}

fn model_report(g: &Germ) -> Outcome {
    let h = remove_harmonics(g, g.source_trunc())?.finite()?;
    let p = &h.model;
    let sym = model_symmetries(p);
    let mut s = String::new();
    let _ = writeln!(s, "P = {p}");
    let _ = writeln!(s, "k = {}", p.k());
    let _ = writeln!(s, "l = {}", p.l());
    let _ = writeln!(s, "class = {}", p.klass());
    let _ = writeln!(s, "H.dimension = {}", sym.dimension);
    let _ = writeln!(s, "H.phase_order = {}", sym.phase_order);
    let _ = writeln!(s, "H.constraint = {}", sym.constraint);
    for (n, gen) in sym.generators.iter().enumerate() {
        let _ = writeln!(
            s,
            "H.generator[{n}] = beta {}, delta {}",
            gen.beta,
            crate::gq::fmt_rational(&gen.delta)
        );
    }
    Ok(s)
}

fn write_holo(s: &mut String, name: &str, h: &HoloSeries2) {
    let _ = writeln!(s, "{name}:");
    for ((a, b), c) in h.sorted_terms() {
        let _ = writeln!(s, "  z^{a} w^{b} = {c}");
    }
}

fn write_real(s: &mut String, name: &str, f: &RealSeries3) {
    let _ = writeln!(s, "{name}:");
    for ((i, j, m), c) in f.sorted_terms() {
        let _ = writeln!(s, "  ({i}, {j}, {m}) = {c}");
    }
}

/// Structured text form of a normal form report.
pub fn normal_form_report(r: &NormalFormReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "case = {}", r.case);
    let _ = writeln!(s, "k = {}", r.k());
    let _ = writeln!(s, "l = {}", r.l());
    let _ = writeln!(s, "order = {}", r.order);
    let _ = writeln!(s, "model = {}", r.model);
    let _ = writeln!(s, "prep.u_weight = {}", r.prep.weighting().u_weight());
    write_holo(&mut s, "prep.g", r.prep.g());
    write_holo(&mut s, "map.f", r.map.f());
    write_holo(&mut s, "map.g", r.map.g());
    write_real(&mut s, "normalized", r.normalized.phi());
    let _ = writeln!(s, "conditions:");
    for c in &r.conditions {
        let _ = writeln!(
            s,
            "  {} = {} ({} slots)",
            c.id,
            if c.all_zero { "holds" } else { "fails" },
            c.residuals.len()
        );
    }
    s
}

fn classify_report(g: &Germ, order: u32) -> Outcome {
    let report = normalize(g, order)?;
    let v = classify_aut(&report)?;
    let mut s = String::new();
    let _ = writeln!(s, "case = {}", v.case_id);
    let _ = writeln!(s, "dimension = {}", v.dimension);
    let _ = writeln!(s, "structure = {}", v.structure);
    match v.m {
        Some(m) => {
            let _ = writeln!(s, "m = {m} (implementation-defined: largest rotation order fixing the normal form)");
        }
        None => {
            let _ = writeln!(s, "m = none");
        }
    }
    let _ = writeln!(s, "jet_order = {}", v.jet_order());
    let _ = writeln!(s, "order_of_validity = {}", v.order_of_validity);
    Ok(s)
}

fn equiv_report(a: &PathBuf, b: &PathBuf, order: u32) -> Outcome {
    let (g1, g2) = (read_germ(a)?, read_germ(b)?);
    match equivalent(&g1, &g2, order)? {
        Verdict::Unsupported { reason } => Err(Failure::Domain(Error::UnsupportedCase(reason))),
        v => Ok(format!("{v}\n")),
    }
}

fn count_report(max_n: u64) -> Outcome {
    if max_n == 0 {
        return Err(Failure::Input("ParseError in --max-n: must be at least 1".into()));
    }
    let mut s = String::from("n N N' solvable\n");
    for row in count_table(max_n) {
        let _ = writeln!(s, "{row}");
    }
    Ok(s)
}
