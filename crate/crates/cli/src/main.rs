use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use orbcoh::algebra::Presentation;
use orbcoh::classify::{Classifier, VerifyReport};
use orbcoh::gysin::{BranchKind, ChaseSolution};
use orbcoh::index::SpaceDescriptor;
use orbcoh::report::{
    chase_report, classify_report, index_output, ss_report, ChaseReport, ClassifyReport, IndexOutput, OrbitInput,
    SsReport,
};
use orbcoh::FieldTag;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "orbcoh", version, about = "Cohomology of orbit spaces of free S^1 and S^3 actions on products of spheres")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the rendered output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Coeff {
    Z2,
    Q,
}

impl From<Coeff> for FieldTag {
    fn from(c: Coeff) -> Self {
        match c {
            Coeff::Z2 => FieldTag::Z2,
            Coeff::Q => FieldTag::Q,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Space {
    Sphere,
    Product,
    PresentationFile,
}

#[derive(clap::Args, Debug)]
struct Orbit {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
    d: u32,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    m: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension chase through the Gysin sequence (Z2 only).
    Chase {
        #[command(flatten)]
        orbit: Orbit,
    },
    /// Leray-Serre spectral sequence of the Borel fibration.
    Ss {
        #[command(flatten)]
        orbit: Orbit,
        #[arg(long, value_enum, default_value_t = Coeff::Z2)]
        coeff: Coeff,
    },
    /// Index bounds of a free space.
    Index {
        #[arg(long, value_enum)]
        space: Space,
        #[arg(long)]
        d: Option<u32>,
        /// Total dimension of a standard sphere.
        #[arg(long)]
        dim: Option<u32>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, value_enum, default_value_t = Coeff::Z2)]
        coeff: Coeff,
        /// JSON presentation of the orbit space.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Generator carrying the characteristic class.
        #[arg(long, default_value = "u")]
        generator: String,
    },
    /// Possible cohomology rings of the orbit space.
    Classify {
        #[command(flatten)]
        orbit: Orbit,
        #[arg(long, value_enum, default_value_t = Coeff::Z2)]
        coeff: Coeff,
    },
    /// Check the fixture corpus against the engines.
    Verify {
        #[arg(long, default_value_t = 20)]
        grid_max: u32,
    },
}

/// Failures that are the caller's fault; exit status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn domain(e: orbcoh::Error) -> anyhow::Error {
    use orbcoh::Error as E;
    match e {
        E::InvalidInput(_) | E::BadDimension { .. } | E::UnsupportedCombination(_) | E::Parse(_) | E::InvalidPresentation(_) => {
            usage(e.to_string())
        }
        other => other.into(),
    }
}

fn sup(d: u32) -> &'static str {
    if d == 1 {
        "S¹"
    } else {
        "S³"
    }
}

fn header(i: &OrbitInput) -> String {
    format!("{} acting freely on S^{} x S^{} over {}", sup(i.d), i.n, i.m, i.field)
}

fn render_solution(s: &ChaseSolution) -> String {
    let branches: Vec<String> = s
        .scenario
        .iter()
        .map(|b| match b.kind {
            BranchKind::PStarTrivial => format!("p* = 0 in degree {}", b.degree),
            BranchKind::PStarNontrivial => format!("p* onto in degree {}", b.degree),
            BranchKind::PStarRankOne => format!("p* of rank one in degree {}", b.degree),
            BranchKind::Truncation { top } => format!("summand from degree {} ends at {top}", b.degree),
        })
        .collect();
    let summands: Vec<String> =
        s.summands.iter().map(|c| format!("Z2[u]/u^{} in degree {}", c.length, c.generator_degree)).collect();
    let mut out = format!("profile {}\n", s.profile);
    if !branches.is_empty() {
        out += &format!("  branches: {}\n", branches.join("; "));
    }
    out += &format!("  summands: {}\n", summands.join(", "));
    out
}

fn text_chase(r: &ChaseReport) -> String {
    let mut out = format!("{}\n", header(&r.input));
    if r.solutions.is_empty() {
        out += &format!("no consistent profile: no free {} action with this cohomology\n", sup(r.input.d));
    }
    for s in &r.solutions {
        out += &render_solution(s);
    }
    out
}

fn render_candidates(c: &[Presentation]) -> String {
    c.iter().map(|p| format!("  ring: {}\n", p.render())).collect()
}

fn text_ss(r: &SsReport) -> String {
    let plural = if r.choices.len() == 1 { "" } else { "s" };
    let mut out = format!("{}: {} differential choice{plural}\n", header(&r.input), r.choices.len());
    for c in &r.choices {
        out += &format!("{}\n", c.choice.render());
        match c.first_violation {
            None => out += &format!("  feasible, total {}\n", c.total),
            Some(deg) => out += &format!("  infeasible: class in degree {deg}\n"),
        }
        out += &render_candidates(&c.candidates);
    }
    out
}

fn text_index(r: &IndexOutput) -> String {
    let mut out = String::new();
    for e in &r.entries {
        if let Some(f) = &e.family {
            out += &format!("{f}\n");
        }
        let rep = &e.report;
        match e.pinned {
            Some(v) if rep.coind_lower == Some(v) => out += &format!("ind = co-ind = {v}\n"),
            Some(v) => out += &format!("ind = {v}\n"),
            None => match rep.ind_lower {
                Some(lo) => out += &format!("ind in [{lo}, {}]\n", rep.ind_upper),
                None => out += &format!("ind <= {}\n", rep.ind_upper),
            },
        }
        out += &format!("cohom-index = {}\n", rep.cohom_index);
        out += &format!("no equivariant map from the standard sphere with index {} or more\n", e.forbidden_from);
        for j in &rep.justification {
            out += &format!("  {} ({})\n", j.value, j.tag);
        }
    }
    out
}

fn text_classify(r: &ClassifyReport) -> String {
    let mut out = format!("{}\n", header(&r.input));
    if !r.congruence_precheck {
        out += "congruence condition fails: no free action\n";
    } else if r.families.is_empty() {
        out += "no family applies\n";
    }
    for f in &r.families {
        out += &format!("{}: {}\n", f.source_case, f.template.render());
        out += &format!("  profile {}\n", f.profile);
        out += &format!("  when {}\n", f.applicability);
        for note in f.notes.iter().chain(&f.flags()) {
            out += &format!("  note: {note}\n");
        }
    }
    out
}

fn text_verify(r: &VerifyReport) -> String {
    let mut out = String::new();
    for row in r.rows.iter().filter(|r| !r.pass) {
        let i = &row.input;
        out += &format!(
            "FAIL {} d={} n={} m={} {}: expected {:?}, got {:?}\n",
            row.suite, i.d, i.n, i.m, i.field, row.expected, row.actual
        );
    }
    for (suite, s) in &r.by_suite {
        out += &format!("{suite}: {}/{} pass, {} flagged\n", s.passed, s.total, s.flagged);
    }
    let s = &r.summary;
    out += &format!("total: {}/{} pass, {} failed, {} flagged\n", s.passed, s.total, s.failed, s.flagged);
    out
}

fn render<T: Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Text => text(value),
    })
}

fn need<T>(v: Option<T>, flag: &str, space: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| usage(format!("--space {space} needs --{flag}")))
}

fn space_of(cmd: &Command) -> anyhow::Result<SpaceDescriptor> {
    let Command::Index { space, d, dim, n, m, coeff, file, generator } = cmd else { unreachable!() };
    Ok(match space {
        Space::Sphere => SpaceDescriptor::StandardSphere { d: need(*d, "d", "sphere")?, total_dim: need(*dim, "dim", "sphere")? },
        Space::Product => SpaceDescriptor::ProductSpheres {
            d: need(*d, "d", "product")?,
            n: need(*n, "n", "product")?,
            m: need(*m, "m", "product")?,
            field: (*coeff).into(),
        },
        Space::PresentationFile => {
            let path = need(file.as_ref(), "file", "presentation-file")?;
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let presentation: Presentation =
                serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            SpaceDescriptor::OrbitPresentation { presentation, generator: generator.clone() }
        }
    })
}

/// Rendered output and whether the run counts as a success.
fn run(cli: &Cli) -> anyhow::Result<(String, bool)> {
    let classifier = || Classifier::from_env().map_err(anyhow::Error::from);
    let f = cli.format;
    Ok(match &cli.command {
        Command::Chase { orbit } => (render(f, &chase_report(orbit.d, orbit.n, orbit.m).map_err(domain)?, text_chase)?, true),
        Command::Ss { orbit, coeff } => {
            (render(f, &ss_report(orbit.d, orbit.n, orbit.m, (*coeff).into()).map_err(domain)?, text_ss)?, true)
        }
        cmd @ Command::Index { .. } => {
            let out = index_output(&classifier()?, space_of(cmd)?).map_err(domain)?;
            (render(f, &out, text_index)?, true)
        }
        Command::Classify { orbit, coeff } => {
            let out = classify_report(&classifier()?, orbit.d, orbit.n, orbit.m, (*coeff).into()).map_err(domain)?;
            (render(f, &out, text_classify)?, true)
        }
        Command::Verify { grid_max } => {
            let report = classifier()?.verify(*grid_max);
            (render(f, &report, text_verify)?, report.all_pass())
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            ExitCode::from(2)
        }
    }
}
