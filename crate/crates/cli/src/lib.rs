//! Command-line front end for `nonlocal-core`.
//!
//! [`run`] parses a command line, performs the analysis and returns a
//! [`CommandOutcome`]; the binary only prints it and exits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use nonlocal_core::games::{self, BellExpression};
use nonlocal_core::hardy::{self, HardyPattern};
use nonlocal_core::local::{self, LocalVerdict};
use nonlocal_core::lp::FarkasCertificate;
use nonlocal_core::optimize::{self, Maximum, SetSpec};
use nonlocal_core::tobl::{self, Bipartition, ToblVerdict};
use nonlocal_core::wirings::{self, ScanVerdict};
use nonlocal_core::{io, paper_data, rational, Behavior, Error, Rational};
use num_traits::Zero;
use serde_json::{json, Map, Value};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub report: String,
    pub machine: Option<Value>,
}

impl CommandOutcome {
    /// Text the binary prints: the JSON document under `--json`, else the report.
    pub fn rendered(&self) -> String {
        match &self.machine {
            Some(doc) => serde_json::to_string_pretty(doc).expect("json value"),
            None => self.report.clone(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "nonlocal", version, about = "Exact analysis of tripartite no-signaling boxes")]
struct Cli {
    /// Emit the machine report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Include certificates and optimizers.
    #[arg(long, global = true)]
    certificate: bool,
    /// Append 6-digit decimal approximations to rationals.
    #[arg(long, global = true)]
    decimal: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a behavior and test no-signaling.
    Check { file: PathBuf },
    /// Evaluate the Hardy witness.
    Hardy {
        file: PathBuf,
        #[arg(long)]
        pattern: Option<PathBuf>,
    },
    /// Decide membership in the local polytope.
    Local { file: PathBuf },
    /// Decide TOBL membership on one cut, or on all three.
    Tobl {
        file: PathBuf,
        #[arg(long, value_parser = parse_cut)]
        cut: Option<Bipartition>,
    },
    /// Evaluate the GYNI expression against its classical bound.
    Gyni { file: PathBuf },
    /// Apply every wiring on a cut and test locality of the results.
    Wirings {
        file: PathBuf,
        #[arg(long, value_parser = parse_cut)]
        cut: Bipartition,
    },
    /// Maximize a Hardy success or a Bell expression over a set.
    Optimize {
        #[arg(long, value_enum)]
        set: SetArg,
        #[arg(long, conflicts_with = "expression")]
        pattern: Option<PathBuf>,
        #[arg(long)]
        expression: Option<PathBuf>,
        /// Restrict `--set tobl` to one cut.
        #[arg(long, value_parser = parse_cut)]
        cut: Option<Bipartition>,
    },
    /// Check every claim on the embedded tables.
    ReproducePaper,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetArg {
    Local,
    Tobl,
    Ns,
}

fn parse_cut(text: &str) -> Result<Bipartition, String> {
    text.parse::<Bipartition>().map_err(|e| e.to_string())
}

enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(msg) => Failure::Internal(msg),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

/// Accumulates the text and machine reports side by side.
struct Report {
    command: &'static str,
    decimal: bool,
    text: String,
    verdicts: Vec<Value>,
    values: Map<String, Value>,
    certificates: Map<String, Value>,
}

impl Report {
    fn new(command: &'static str, decimal: bool) -> Self {
        Report {
            command,
            decimal,
            text: String::new(),
            verdicts: Vec::new(),
            values: Map::new(),
            certificates: Map::new(),
        }
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.text.push_str(text.as_ref());
        self.text.push('\n');
    }

    fn q(&self, value: &Rational) -> String {
        if self.decimal {
            format!("{} ({})", rational::format(value), rational::format_decimal(value))
        } else {
            rational::format(value)
        }
    }

    fn value(&mut self, name: &str, value: &Rational) {
        self.values.insert(name.to_string(), Value::String(rational::format(value)));
    }

    fn verdict(&mut self, name: &str, holds: bool) {
        self.verdicts.push(json!({ "name": name, "value": holds }));
    }

    fn certificate(&mut self, name: &str, doc: Value) {
        self.certificates.insert(name.to_string(), doc);
    }

    fn finish(self, exit_code: i32, json: bool) -> CommandOutcome {
        let machine = json.then(|| {
            let mut doc = json!({
                "command": self.command,
                "verdicts": self.verdicts,
                "values": self.values,
            });
            if !self.certificates.is_empty() {
                doc["certificates"] = Value::Object(self.certificates);
            }
            doc
        });
        CommandOutcome { exit_code, report: self.text, machine }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn code(b: bool) -> i32 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_behavior(path: &Path) -> Result<Behavior, Failure> {
    Ok(io::behavior_from_json(&read(path)?)?)
}

fn load_pattern(path: Option<&PathBuf>) -> Result<HardyPattern, Failure> {
    match path {
        Some(p) => Ok(io::pattern_from_json(&read(p)?)?),
        None => Ok(hardy::canonical_pattern()),
    }
}

fn multipliers_json(cert: &FarkasCertificate) -> Value {
    Value::Array(cert.multipliers.iter().map(|y| Value::String(rational::format(y))).collect())
}

fn behavior_json(behavior: &Behavior) -> Result<Value, Failure> {
    let text = io::behavior_to_json(behavior)?;
    serde_json::from_str(&text).map_err(|e| Failure::Internal(e.to_string()))
}

/// Runs one command line; `args` includes the program name.
pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let exit_code = if e.use_stderr() { EXIT_INVALID } else { EXIT_TRUE };
            let mut report = e.render().to_string();
            if exit_code == EXIT_INVALID && !report.contains("Usage") {
                report = format!("{report}\n{}\n", Cli::command().render_usage());
            }
            return CommandOutcome { exit_code, report, machine: None };
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => outcome,
        Err(Failure::Invalid(msg)) => {
            CommandOutcome { exit_code: EXIT_INVALID, report: format!("error: {msg}\n"), machine: None }
        }
        Err(Failure::Internal(msg)) => {
            CommandOutcome { exit_code: EXIT_INTERNAL, report: format!("internal error: {msg}\n"), machine: None }
        }
    }
}

fn dispatch(cli: &Cli) -> Result<CommandOutcome, Failure> {
    match &cli.command {
        Command::Check { file } => check(cli, file),
        Command::Hardy { file, pattern } => hardy_cmd(cli, file, pattern.as_ref()),
        Command::Local { file } => local_cmd(cli, file),
        Command::Tobl { file, cut } => tobl_cmd(cli, file, *cut),
        Command::Gyni { file } => gyni_cmd(cli, file),
        Command::Wirings { file, cut } => wirings_cmd(cli, file, *cut),
        Command::Optimize { set, pattern, expression, cut } => {
            optimize_cmd(cli, *set, pattern.as_ref(), expression.as_ref(), *cut)
        }
        Command::ReproducePaper => reproduce(cli),
    }
}

fn check(cli: &Cli, file: &Path) -> Result<CommandOutcome, Failure> {
    let behavior = load_behavior(file)?;
    let mut r = Report::new("check", cli.decimal);
    let violations = behavior.violations();
    let valid = violations.is_empty();
    r.line(format!("scenario: {}", behavior.scenario()));
    r.line(format!("valid: {}", yes(valid)));
    for v in &violations {
        r.line(format!("  {v}"));
    }
    let witnesses = if valid { behavior.signaling_witnesses() } else { Vec::new() };
    let no_signaling = valid && witnesses.is_empty();
    r.line(format!("no-signaling: {}", yes(no_signaling)));
    for w in witnesses.iter().take(10) {
        r.line(format!("  {w}"));
    }
    if witnesses.len() > 10 {
        r.line(format!("  ... {} more", witnesses.len() - 10));
    }
    r.verdict("valid", valid);
    r.verdict("no_signaling", no_signaling);
    Ok(r.finish(code(no_signaling), cli.json))
}

fn hardy_cmd(cli: &Cli, file: &Path, pattern: Option<&PathBuf>) -> Result<CommandOutcome, Failure> {
    let behavior = load_behavior(file)?;
    let pattern = load_pattern(pattern)?;
    behavior.validate()?;
    let v = hardy::hardy_check(&behavior, &pattern)?;
    let mut r = Report::new("hardy", cli.decimal);
    r.line(format!("target {}: success = {}", pattern.target(), r.q(&v.success)));
    for (cell, value) in &v.residuals {
        r.line(format!("zero {cell}: {}", r.q(value)));
        r.value(&format!("residual {cell}"), value);
    }
    r.line(format!("zeros satisfied: {}", yes(v.zeros_satisfied)));
    r.line(format!("Hardy correlation: {}", yes(v.is_hardy_correlation())));
    r.line(format!("post-quantum: {} (threshold {})", yes(v.post_quantum), r.q(&v.threshold)));
    r.value("success", &v.success);
    r.value("threshold", &v.threshold);
    r.verdict("zeros_satisfied", v.zeros_satisfied);
    r.verdict("hardy_correlation", v.is_hardy_correlation());
    r.verdict("post_quantum", v.post_quantum);
    Ok(r.finish(code(v.post_quantum), cli.json))
}

fn local_cmd(cli: &Cli, file: &Path) -> Result<CommandOutcome, Failure> {
    let behavior = load_behavior(file)?;
    let verdict = local::local_membership(&behavior)?;
    let scenario = behavior.scenario();
    let mut r = Report::new("local", cli.decimal);
    r.line(format!("local: {}", yes(verdict.is_local())));
    r.verdict("local", verdict.is_local());
    match &verdict {
        LocalVerdict::Local(decomposition) => {
            r.line(format!("decomposition uses {} deterministic strategies", decomposition.terms.len()));
            if cli.certificate {
                let mut terms = Vec::new();
                for (weight, strategy) in &decomposition.terms {
                    let index = strategy.index(&scenario);
                    r.line(format!("  strategy {index}: {}", r.q(weight)));
                    terms.push(json!({ "strategy": index, "weight": rational::format(weight) }));
                }
                r.certificate("decomposition", Value::Array(terms));
            }
        }
        LocalVerdict::Nonlocal(cert) => {
            let program = local::local_lp(&behavior);
            let verified = cert.verify(&program);
            r.line(format!("infeasibility certificate: available (verifies: {})", yes(verified)));
            r.verdict("certificate_verifies", verified);
            if cli.certificate {
                r.line("Bell functional (cell: multiplier), nonnegative on every deterministic box, negative here:");
                for (i, y) in cert.multipliers.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                    r.line(format!("  {}: {}", scenario.cell_at(i), r.q(y)));
                }
                r.certificate("local", multipliers_json(cert));
            }
        }
    }
    Ok(r.finish(code(verdict.is_local()), cli.json))
}

fn tobl_cmd(cli: &Cli, file: &Path, cut: Option<Bipartition>) -> Result<CommandOutcome, Failure> {
    let behavior = load_behavior(file)?;
    let results = match cut {
        Some(cut) => vec![(cut, tobl::tobl_membership(&behavior, cut)?)],
        None => tobl::tobl_membership_all(&behavior)?,
    };
    let mut r = Report::new("tobl", cli.decimal);
    let mut all = true;
    for (cut, verdict) in &results {
        all &= verdict.is_member();
        r.verdict(&format!("tobl {cut}"), verdict.is_member());
        match verdict {
            ToblVerdict::Member(decomposition) => {
                r.line(format!(
                    "{cut}: member ({} forward terms, {} backward terms, reconstructs both ways)",
                    decomposition.forward.len(),
                    decomposition.backward.len()
                ));
                if cli.certificate {
                    let text = io::decomposition_to_json(decomposition)?;
                    let doc: Value = serde_json::from_str(&text).map_err(|e| Failure::Internal(e.to_string()))?;
                    r.certificate(&format!("decomposition {cut}"), doc);
                }
            }
            ToblVerdict::NonMember(cert) => {
                let verified = cert.verify(&tobl::tobl_lp(&behavior, *cut)?);
                r.line(format!("{cut}: not a member (certificate verifies: {})", yes(verified)));
                if cli.certificate {
                    for (i, y) in cert.multipliers.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        r.line(format!("  row {i}: {}", r.q(y)));
                    }
                    r.certificate(&format!("tobl {cut}"), multipliers_json(cert));
                }
            }
        }
    }
    Ok(r.finish(code(all), cli.json))
}

fn gyni_cmd(cli: &Cli, file: &Path) -> Result<CommandOutcome, Failure> {
    let behavior = load_behavior(file)?;
    behavior.validate()?;
    let expr = games::gyni_expression();
    let value = games::evaluate(&expr, &behavior)?;
    let bound = games::gyni_bound();
    let ok = games::satisfies(&value, &bound);
    let mut r = Report::new("gyni", cli.decimal);
    r.line(format!("GYNI value = {}, classical bound = {}", r.q(&value), r.q(&bound)));
    r.line(format!("satisfied: {}", yes(ok)));
    r.value("value", &value);
    r.value("bound", &bound);
    r.verdict("satisfied", ok);
    Ok(r.finish(code(ok), cli.json))
}

fn wirings_cmd(cli: &Cli, file: &Path, cut: Bipartition) -> Result<CommandOutcome, Failure> {
    let behavior = load_behavior(file)?;
    let scan = wirings::wired_locality_scan(&behavior, cut)?;
    let mut r = Report::new("wirings", cli.decimal);
    r.line(format!("{cut}: {} wirings, {} distinct bipartite boxes", scan.wirings_checked, scan.distinct_behaviors));
    r.line(format!("all local: {}", yes(scan.all_local())));
    r.verdict("all_local", scan.all_local());
    r.values.insert("wirings_checked".into(), json!(scan.wirings_checked));
    r.values.insert("distinct_behaviors".into(), json!(scan.distinct_behaviors));
    if let ScanVerdict::Nonlocal { wiring, wired, certificate } = &scan.verdict {
        let verified = certificate.verify(&local::local_lp(wired));
        r.line(format!("first nonlocal wiring: #{} {wiring}", wiring.index()));
        r.line(format!("certificate verifies: {}", yes(verified)));
        r.values.insert("wiring".into(), json!(wiring.index()));
        if cli.certificate {
            for (i, y) in certificate.multipliers.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                r.line(format!("  {}: {}", wired.scenario().cell_at(i), r.q(y)));
            }
            r.certificate("wired_behavior", behavior_json(wired)?);
            r.certificate("local", multipliers_json(certificate));
        }
    }
    Ok(r.finish(code(scan.all_local()), cli.json))
}

fn optimize_cmd(
    cli: &Cli,
    set: SetArg,
    pattern: Option<&PathBuf>,
    expression: Option<&PathBuf>,
    cut: Option<Bipartition>,
) -> Result<CommandOutcome, Failure> {
    let spec = match (set, cut) {
        (SetArg::Local, None) => SetSpec::Local,
        (SetArg::Ns, None) => SetSpec::NoSignaling,
        (SetArg::Tobl, None) => SetSpec::tobl_all(),
        (SetArg::Tobl, Some(cut)) => SetSpec::Tobl(vec![cut]),
        (_, Some(_)) => return Err(Failure::Invalid("--cut applies only to --set tobl".into())),
    };
    let mut r = Report::new("optimize", cli.decimal);
    let (label, maximum): (String, Maximum) = match expression {
        Some(path) => {
            let expr: BellExpression = io::expression_from_json(&read(path)?)?;
            let m = optimize::maximize(&expr.scenario(), expr.coefficients(), &[], &spec)?;
            ("expression".into(), m)
        }
        None => {
            let pattern = load_pattern(pattern)?;
            let m = hardy::hardy_max(&spec, &pattern)?;
            (format!("Hardy success at {}", pattern.target()), m)
        }
    };
    let set_name = match &spec {
        SetSpec::Local => "local".to_string(),
        SetSpec::NoSignaling => "no-signaling".to_string(),
        SetSpec::Tobl(cuts) => {
            format!("tobl({})", cuts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))
        }
    };
    r.line(format!("maximum of {label} over {set_name} = {}", r.q(&maximum.value)));
    r.value("maximum", &maximum.value);
    r.values.insert("set".into(), Value::String(set_name));
    r.verdict("feasible", true);
    if cli.certificate {
        r.line(io::behavior_to_json(&maximum.behavior)?);
        r.certificate("optimizer", behavior_json(&maximum.behavior)?);
    }
    Ok(r.finish(EXIT_TRUE, cli.json))
}

fn reproduce(cli: &Cli) -> Result<CommandOutcome, Failure> {
    let claims = paper_data::verify_paper_claims();
    let mut r = Report::new("reproduce-paper", cli.decimal);
    let _ = writeln!(r.text, "{claims}");
    for c in &claims.claims {
        r.verdict(c.id, c.pass);
        r.values
            .insert(c.id.to_string(), serde_json::to_value(&c.computed).map_err(|e| Failure::Internal(e.to_string()))?);
    }
    Ok(r.finish(code(claims.all_pass()), cli.json))
}
