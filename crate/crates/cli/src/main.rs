use std::fmt;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use surfq::quotient::DEFAULT_GUARD;
use surfq::verify::{self, Check, Status, VerificationReport, VerifyConfig};
use surfq::{
    Enumeration, Error, InducedAction, ModKElement, Nil2Element, QuotientElement, QuotientSpec,
    SurfaceContext, TwistName, Word,
};

/// Arithmetic in the class-2 nilpotent quotient of a closed surface group and
/// its characteristic quotients.
#[derive(Parser, Debug)]
#[command(name = "surfq", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Opts {
    /// Genus (for `verify`, a comma-separated list).
    #[arg(short = 'g', long = "genus", global = true)]
    genus: Option<String>,
    /// Quotient: nil2, modK or powK:E.
    #[arg(short = 'q', long = "quotient", global = true, default_value = "nil2")]
    quotient: QuotientArg,
    /// Allow any exponent E >= 2 in powK:E.
    #[arg(long = "any-exponent", global = true)]
    any_exponent: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exhaustive orbit depth for probes.
    #[arg(long, global = true, default_value_t = 4)]
    depth: usize,
    /// Random twist compositions for probes.
    #[arg(long, global = true, default_value_t = 2000)]
    samples: usize,
    /// Largest quotient order to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_GUARD)]
    guard: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of a word.
    Eval { word: String },
    /// Product of two words.
    Mul { left: String, right: String },
    /// Inverse of a word.
    Inv { word: String },
    /// Integer power of a word.
    Pow {
        word: String,
        #[arg(allow_hyphen_values = true)]
        exponent: i64,
    },
    /// Apply a Dehn twist (t1..t{2g+1}, s1..s{g}) to a word.
    Twist { name: String, word: String },
    /// Order of the selected finite quotient.
    Order {
        /// Cross-check by enumeration.
        #[arg(long)]
        bfs: bool,
    },
    /// Search twist orbits of simple loops for trivial images.
    Probe,
    /// Run the verification suite.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum QuotientArg {
    Nil2,
    ModK,
    PowK(u32),
}

impl FromStr for QuotientArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nil2" => Ok(Self::Nil2),
            "modK" => Ok(Self::ModK),
            _ => s
                .strip_prefix("powK:")
                .and_then(|e| e.parse().ok())
                .map(Self::PowK)
                .ok_or_else(|| format!("expected nil2, modK or powK:E, got `{s}`")),
        }
    }
}

/// Failure categories, mapped to exit codes 1 and 2.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::Parse { .. }
            | Error::GeneratorOutOfRange { .. }
            | Error::InvalidTwist(_)
            | Error::InvalidExponent { .. }
            | Error::GenusTooSmall(_) => Failure::Usage(err.to_string()),
            _ => Failure::Check(err.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

enum Element {
    Nil2(Nil2Element),
    ModK(ModKElement),
    Quotient(QuotientElement),
}

impl Element {
    fn to_json(&self) -> Value {
        match self {
            Element::Nil2(a) => a.to_json(),
            Element::ModK(a) => a.to_json(),
            Element::Quotient(a) => a.to_json(),
        }
    }

    fn multiply(&self, rhs: &Element) -> Result<Element, Error> {
        Ok(match (self, rhs) {
            (Element::Nil2(a), Element::Nil2(b)) => Element::Nil2(a.multiply(b)?),
            (Element::ModK(a), Element::ModK(b)) => Element::ModK(a.multiply(b)?),
            (Element::Quotient(a), Element::Quotient(b)) => Element::Quotient(a.multiply(b)?),
            _ => unreachable!("both operands come from the same selector"),
        })
    }

    fn pow(&self, p: i64) -> Element {
        match self {
            Element::Nil2(a) => Element::Nil2(a.pow(p)),
            Element::ModK(a) => Element::ModK(a.pow(p)),
            Element::Quotient(a) => Element::Quotient(a.pow(p)),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Nil2(a) => a.fmt(f),
            Element::ModK(a) => a.fmt(f),
            Element::Quotient(a) => a.fmt(f),
        }
    }
}

struct Session {
    ctx: SurfaceContext,
    quotient: QuotientArg,
    spec: Option<QuotientSpec>,
    opts: Opts,
}

impl Session {
    fn new(opts: Opts) -> Result<Self, Failure> {
        let text = opts.genus.as_deref().unwrap_or("2");
        let genus: u32 = text
            .parse()
            .map_err(|_| Failure::Usage(format!("invalid genus `{text}`")))?;
        let ctx = SurfaceContext::new(genus)?;
        let spec = match opts.quotient {
            QuotientArg::PowK(e) if opts.any_exponent => Some(QuotientSpec::with_any_exponent(&ctx, e)?),
            QuotientArg::PowK(e) => Some(QuotientSpec::new(&ctx, e)?),
            _ => None,
        };
        Ok(Self {
            ctx,
            quotient: opts.quotient,
            spec,
            opts,
        })
    }

    fn require_spec(&self) -> Result<QuotientSpec, Failure> {
        self.spec
            .ok_or_else(|| Failure::Usage("this command needs -q powK:E".to_string()))
    }

    fn word(&self, text: &str) -> Result<Word, Failure> {
        Ok(Word::parse(text, &self.ctx)?)
    }

    fn element(&self, text: &str) -> Result<Element, Failure> {
        let a = Nil2Element::evaluate(&self.ctx, &self.word(text)?)?;
        Ok(self.select(a)?)
    }

    fn select(&self, a: Nil2Element) -> Result<Element, Error> {
        Ok(match self.quotient {
            QuotientArg::Nil2 => Element::Nil2(a),
            QuotientArg::ModK => Element::ModK(ModKElement::project(&a)),
            QuotientArg::PowK(_) => Element::Quotient(self.spec.expect("set with PowK").project(&a)?),
        })
    }

    fn emit(&self, human: impl fmt::Display, structured: Value) {
        match self.opts.format {
            Format::Human => println!("{human}"),
            Format::Json => println!("{structured}"),
        }
    }
}

fn run(cli: Cli) -> Outcome {
    if let Command::Verify = cli.command {
        return verify_cmd(cli.opts);
    }
    let s = Session::new(cli.opts)?;
    match cli.command {
        Command::Eval { word } => {
            let a = s.element(&word)?;
            s.emit(&a, a.to_json());
        }
        Command::Mul { left, right } => {
            let a = s.element(&left)?.multiply(&s.element(&right)?)?;
            s.emit(&a, a.to_json());
        }
        Command::Inv { word } => {
            let a = s.element(&word)?.pow(-1);
            s.emit(&a, a.to_json());
        }
        Command::Pow { word, exponent } => {
            let a = s.element(&word)?.pow(exponent);
            s.emit(&a, a.to_json());
        }
        Command::Twist { name, word } => {
            let name: TwistName = name.parse()?;
            let table = surfq::twist_table(name, &s.ctx)?;
            let image = s.word(&word)?.substitute(&table).free_reduce();
            let class = s.select(Nil2Element::evaluate(&s.ctx, &image)?)?;
            s.emit(
                format_args!("{image}\n{class}"),
                json!({ "twist": name.to_string(), "word": image.to_string(), "element": class.to_json() }),
            );
        }
        Command::Order { bfs } => {
            let spec = s.require_spec()?;
            let order = spec.order();
            let counted = if bfs {
                let all = Enumeration::new(&spec, s.opts.guard)?;
                if order == all.len().into() {
                    Some(all.len())
                } else {
                    return Err(Failure::Check(format!(
                        "enumeration found {} elements, closed form gives {order}",
                        all.len()
                    )));
                }
            } else {
                None
            };
            let order_json: Value = serde_json::from_str(&order.to_string()).expect("integer literal");
            s.emit(
                &order,
                json!({
                    "genus": spec.genus(),
                    "exponent": spec.exponent(),
                    "d": spec.m_modulus(),
                    "order": order_json,
                    "bfs": counted,
                }),
            );
        }
        Command::Probe => {
            let spec = s.require_spec()?;
            // Twist tables must be valid for the genus before probing.
            for name in TwistName::all(&s.ctx) {
                InducedAction::for_twist(name, &s.ctx)?;
            }
            let checks = verify::probe_nongeometric(&spec, s.opts.depth, s.opts.samples, s.opts.seed);
            let report = VerificationReport { checks };
            print_report(&report, s.opts.format);
            if !report.passed() {
                return Err(Failure::Check("probe found a trivial image".to_string()));
            }
        }
        Command::Verify => unreachable!("handled above"),
    }
    Ok(())
}

fn verify_cmd(opts: Opts) -> Outcome {
    let text = opts.genus.as_deref().unwrap_or("2,3");
    let genera = text
        .split(',')
        .map(|t| {
            let g: u32 = t
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("invalid genus list `{text}`")))?;
            SurfaceContext::new(g)?;
            Ok(g)
        })
        .collect::<Result<Vec<u32>, Failure>>()?;
    if opts.quotient != QuotientArg::Nil2 || opts.any_exponent {
        return Err(Failure::Usage(
            "verify covers pi/pi^g K and pi/pi^(2g) K; drop -q and --any-exponent".to_string(),
        ));
    }
    let config = VerifyConfig {
        seed: opts.seed,
        depth: opts.depth,
        samples: opts.samples,
        guard: opts.guard,
    };
    let report = verify::run_all(&genera, &config);
    print_report(&report, opts.format);
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} checks failed", report.count(Status::Fail))))
    }
}

fn print_report(report: &VerificationReport, format: Format) {
    match format {
        Format::Json => print!("{}", report.to_json_lines()),
        Format::Human => {
            for c in &report.checks {
                println!("{}", human_line(c));
            }
            println!(
                "{}: {} pass, {} deviation, {} fail",
                report.status().label(),
                report.count(Status::Pass),
                report.count(Status::Deviation),
                report.count(Status::Fail)
            );
        }
    }
}

fn human_line(c: &Check) -> String {
    let mut line = format!("{:<9} {:<44} {}", c.status.label().to_uppercase(), c.id, c.anchor);
    if let Some(note) = c.details.get("note").and_then(Value::as_str) {
        line.push_str(&format!(" [{note}]"));
    }
    if let Some(cov) = c.details.get("coverage").and_then(Value::as_str) {
        line.push_str(&format!(" ({cov})"));
    }
    line
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_selector() {
        assert_eq!("nil2".parse::<QuotientArg>(), Ok(QuotientArg::Nil2));
        assert_eq!("modK".parse::<QuotientArg>(), Ok(QuotientArg::ModK));
        assert_eq!("powK:6".parse::<QuotientArg>(), Ok(QuotientArg::PowK(6)));
        assert!("powK:".parse::<QuotientArg>().is_err());
        assert!("modk".parse::<QuotientArg>().is_err());
    }

    #[test]
    fn error_categories() {
        assert!(matches!(Failure::from(Error::GenusTooSmall(1)), Failure::Usage(_)));
        assert!(matches!(
            Failure::from(Error::GuardExceeded { order: "9".into(), guard: 1 }),
            Failure::Check(_)
        ));
    }

    #[test]
    fn cli_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
