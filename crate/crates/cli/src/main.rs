use std::fs;
use std::io::IsTerminal;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use tracecone_core::corpus::{self, CorpusEntry};
use tracecone_core::document::{self, Document, Kind};
use tracecone_core::elliott::{compose_e_morphisms, validate_e_morphism, validate_e_object};
use tracecone_core::functors::{
    apply_f, apply_g, e_object_difference, roundtrip_e_morphism, roundtrip_e_object, roundtrip_s_morphism,
    roundtrip_s_object, s_object_difference, search_iso_e, search_iso_s, transport_e_to_s, transport_s_to_e,
    verify_iso_e, verify_iso_s, RoundTripReport,
};
use tracecone_core::generate::{generate, GenOptions};
use tracecone_core::stevens::{compose_s_morphisms, validate_s_morphism, validate_s_object};
use tracecone_core::{Error, Report};

#[derive(Parser)]
#[command(name = "tracecone", version, about = "Check and transport trace-cone invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate an object, or a morphism against --src and --dst.
    Validate {
        file: PathBuf,
        #[arg(long)]
        src: Option<PathBuf>,
        #[arg(long)]
        dst: Option<PathBuf>,
    },
    /// Apply a functor to an object: f takes Stevens to Elliott, g the reverse.
    Apply {
        #[arg(long, value_enum)]
        functor: Functor,
        file: PathBuf,
    },
    /// Transport a morphism to the other side.
    Transport {
        #[arg(long, value_enum)]
        direction: TransportDirection,
        morphism: PathBuf,
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        dst: PathBuf,
    },
    /// Send an object or morphism out and back and compare.
    Roundtrip {
        file: PathBuf,
        /// Exit 1 unless the round trip is the identity.
        #[arg(long)]
        assert_identity: bool,
        #[arg(long)]
        src: Option<PathBuf>,
        #[arg(long)]
        dst: Option<PathBuf>,
    },
    /// Compose two morphisms: SECOND after FIRST.
    Compose { first: PathBuf, second: PathBuf },
    /// Compare two objects exactly, through a witness pair, or by search.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, num_args = 2, value_names = ["FWD", "BWD"], conflicts_with = "search")]
        witness: Option<Vec<PathBuf>>,
        #[arg(long)]
        search: bool,
        /// Where --search writes the witness pair.
        #[arg(long, requires = "search")]
        out: Option<PathBuf>,
    },
    /// Generate a random valid document.
    Gen {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        blocks: usize,
        #[arg(long, default_value_t = 2)]
        cone_dim: usize,
        #[arg(long, default_value_t = 0)]
        phantom: usize,
        /// For morphisms, write the source and target objects into this directory.
        #[arg(long)]
        context: Option<PathBuf>,
    },
    /// List the reference corpus, check it, or write it out.
    Corpus {
        #[arg(long)]
        run_all: bool,
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Functor {
    F,
    G,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransportDirection {
    S2e,
    E2s,
}

struct Style {
    color: bool,
}

impl Style {
    fn detect() -> Self {
        let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
        Style { color: !no_color && std::io::stdout().is_terminal() }
    }

    fn paint(&self, text: &str, good: bool) -> String {
        if !self.color {
            return text.to_string();
        }
        format!("\x1b[{}m{text}\x1b[0m", if good { 32 } else { 31 })
    }

    fn report(&self, r: &Report) {
        if r.is_ok() {
            println!("{}", self.paint("ok", true));
        }
        for v in &r.violations {
            println!("{} [{}] {}", self.paint("violation", false), v.check, v.detail);
        }
    }
}

fn load(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    document::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn context(src: &Option<PathBuf>, dst: &Option<PathBuf>) -> Result<(Document, Document)> {
    match (src, dst) {
        (Some(s), Some(d)) => Ok((load(s)?, load(d)?)),
        _ => bail!("morphisms need --src and --dst"),
    }
}

fn print_doc(doc: &Document) {
    print!("{}", document::emit(doc));
}

fn write_doc(path: &Path, doc: &Document) -> Result<()> {
    fs::write(path, document::emit(doc)).with_context(|| format!("cannot write {}", path.display()))
}

fn kind_error(what: &str, doc: &Document) -> anyhow::Error {
    anyhow!("{what}, got a {}", doc.kind().name())
}

fn validate(style: &Style, file: &Path, src: &Option<PathBuf>, dst: &Option<PathBuf>) -> Result<bool> {
    let doc = load(file)?;
    let report = match &doc {
        Document::SObject(s) => validate_s_object(s),
        Document::EObject(e) => validate_e_object(e),
        Document::SMorphism(m) => match context(src, dst)? {
            (Document::SObject(a), Document::SObject(b)) => validate_s_morphism(m, &a, &b),
            _ => bail!("an s-morphism needs s-object context"),
        },
        Document::EMorphism(m) => match context(src, dst)? {
            (Document::EObject(a), Document::EObject(b)) => validate_e_morphism(m, &a, &b),
            _ => bail!("an e-morphism needs e-object context"),
        },
    };
    style.report(&report);
    Ok(report.is_ok())
}

fn roundtrip(style: &Style, file: &Path, assert_identity: bool, src: &Option<PathBuf>, dst: &Option<PathBuf>) -> Result<bool> {
    let doc = load(file)?;
    let report: RoundTripReport = match &doc {
        Document::SObject(s) => roundtrip_s_object(s)?,
        Document::EObject(e) => roundtrip_e_object(e)?,
        Document::SMorphism(m) => match context(src, dst)? {
            (Document::SObject(a), Document::SObject(b)) => roundtrip_s_morphism(m, &a, &b)?,
            _ => bail!("an s-morphism needs s-object context"),
        },
        Document::EMorphism(m) => match context(src, dst)? {
            (Document::EObject(a), Document::EObject(b)) => roundtrip_e_morphism(m, &a, &b)?,
            _ => bail!("an e-morphism needs e-object context"),
        },
    };
    let text = report.to_string();
    let (head, rest) = text.split_once('\n').map_or((text.as_str(), None), |(h, r)| (h, Some(r)));
    println!("{}", style.paint(head, report.is_identity()));
    if let Some(rest) = rest {
        println!("{rest}");
    }
    Ok(report.is_identity() || !assert_identity)
}

fn compare(style: &Style, a: &Path, b: &Path, witness: &Option<Vec<PathBuf>>, search: bool, out: &Option<PathBuf>) -> Result<bool> {
    let (da, db) = (load(a)?, load(b)?);
    if let Some(w) = witness {
        let (fwd, bwd) = (load(&w[0])?, load(&w[1])?);
        let report = match (&da, &db, &fwd, &bwd) {
            (Document::SObject(x), Document::SObject(y), Document::SMorphism(f), Document::SMorphism(g)) => {
                verify_iso_s(x, y, f, g)
            }
            (Document::EObject(x), Document::EObject(y), Document::EMorphism(f), Document::EMorphism(g)) => {
                verify_iso_e(x, y, f, g)
            }
            _ => bail!("witness kinds do not match the objects"),
        };
        style.report(&report);
        return Ok(report.is_ok());
    }
    if search {
        let found = match (&da, &db) {
            (Document::SObject(x), Document::SObject(y)) => {
                search_iso_s(x, y).map(|(f, g)| (Document::SMorphism(f), Document::SMorphism(g)))
            }
            (Document::EObject(x), Document::EObject(y)) => {
                search_iso_e(x, y).map(|(f, g)| (Document::EMorphism(f), Document::EMorphism(g)))
            }
            _ => bail!("compare needs two objects of the same kind"),
        };
        let Some((f, g)) = found else {
            println!("{}", style.paint("no isomorphism found", false));
            return Ok(false);
        };
        println!("{}", style.paint("isomorphic", true));
        if let Some(dir) = out {
            let ext = corpus::extension(f.kind());
            write_doc(&dir.join(format!("forward.{ext}")), &f)?;
            write_doc(&dir.join(format!("backward.{ext}")), &g)?;
        }
        return Ok(true);
    }
    let diff = match (&da, &db) {
        (Document::SObject(x), Document::SObject(y)) => s_object_difference(x, y),
        (Document::EObject(x), Document::EObject(y)) => e_object_difference(x, y),
        _ => bail!("compare needs two objects of the same kind"),
    };
    let same = diff.is_none();
    match diff {
        None => println!("{}", style.paint("identical", true)),
        Some(w) => {
            println!("{}", style.paint("different", false));
            println!("  {} at {}\n  first: {}\n  second: {}", w.component, w.location, w.expected, w.actual);
        }
    }
    Ok(same)
}

fn run_corpus(style: &Style, run_all: bool, write: &Option<PathBuf>) -> Result<bool> {
    let entries = corpus::corpus();
    if let Some(dir) = write {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for e in &entries {
            write_doc(&dir.join(e.file_name()), &e.document)?;
        }
    }
    let mut all_ok = true;
    for e in &entries {
        if run_all {
            let actual = corpus::run_checks(&entries, e)?;
            let ok = actual == e.expected;
            all_ok &= ok;
            println!("{} {}", style.paint(if ok { "pass" } else { "FAIL" }, ok), e.name);
            if !ok {
                print_differences(e, &actual);
            }
        } else {
            println!("{}", describe(e));
        }
    }
    Ok(all_ok)
}

fn describe(e: &CorpusEntry) -> String {
    let fails = e.expected_failures();
    let mut line = format!("{:<26} {}", e.file_name(), e.document.kind().name());
    if !fails.is_empty() {
        line.push_str(&format!("  fails: {}", fails.join(", ")));
    }
    for key in [corpus::ROUNDTRIP, corpus::IDEAL_PROPERTY] {
        if let Some(v) = e.expected.get(key) {
            line.push_str(&format!("  {key}: {v}"));
        }
    }
    line
}

fn print_differences(e: &CorpusEntry, actual: &std::collections::BTreeMap<String, corpus::Verdict>) {
    let keys: std::collections::BTreeSet<_> = e.expected.keys().chain(actual.keys()).collect();
    for k in keys {
        let (want, got) = (e.expected.get(k), actual.get(k));
        if want != got {
            let show = |v: Option<&corpus::Verdict>| v.map_or("-".to_string(), |v| v.to_string());
            println!("  {k}: expected {}, got {}", show(want), show(got));
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let style = Style::detect();
    match cli.command {
        Command::Validate { file, src, dst } => validate(&style, &file, &src, &dst),
        Command::Apply { functor, file } => {
            let doc = load(&file)?;
            let out = match (functor, &doc) {
                (Functor::F, Document::SObject(s)) => Document::EObject(apply_f(s)?),
                (Functor::G, Document::EObject(e)) => Document::SObject(apply_g(e)?),
                (Functor::F, d) => return Err(kind_error("f applies to an s-object", d)),
                (Functor::G, d) => return Err(kind_error("g applies to an e-object", d)),
            };
            print_doc(&out);
            Ok(true)
        }
        Command::Transport { direction, morphism, src, dst } => {
            let (m, a, b) = (load(&morphism)?, load(&src)?, load(&dst)?);
            let out = match (direction, &m, &a, &b) {
                (TransportDirection::S2e, Document::SMorphism(m), Document::SObject(a), Document::SObject(b)) => {
                    Document::EMorphism(transport_s_to_e(m, a, b)?)
                }
                (TransportDirection::E2s, Document::EMorphism(m), Document::EObject(a), Document::EObject(b)) => {
                    Document::SMorphism(transport_e_to_s(m, a, b)?)
                }
                (TransportDirection::S2e, ..) => bail!("s2e needs an s-morphism between s-objects"),
                (TransportDirection::E2s, ..) => bail!("e2s needs an e-morphism between e-objects"),
            };
            print_doc(&out);
            Ok(true)
        }
        Command::Roundtrip { file, assert_identity, src, dst } => roundtrip(&style, &file, assert_identity, &src, &dst),
        Command::Compose { first, second } => {
            let out = match (load(&first)?, load(&second)?) {
                (Document::SMorphism(a), Document::SMorphism(b)) => Document::SMorphism(compose_s_morphisms(&b, &a)?),
                (Document::EMorphism(a), Document::EMorphism(b)) => Document::EMorphism(compose_e_morphisms(&b, &a)?),
                _ => bail!("compose needs two morphisms of the same kind"),
            };
            print_doc(&out);
            Ok(true)
        }
        Command::Compare { a, b, witness, search, out } => compare(&style, &a, &b, &witness, search, &out),
        Command::Gen { kind, seed, blocks, cone_dim, phantom, context } => {
            let kind = Kind::parse(&kind).ok_or_else(|| anyhow!("unknown kind `{kind}`"))?;
            let generated = generate(kind, seed, GenOptions { blocks, cone_dim, phantom })?;
            if let (Some(dir), Some((s, d))) = (context, &generated.context) {
                fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
                let ext = corpus::extension(s.kind());
                write_doc(&dir.join(format!("src.{ext}")), s)?;
                write_doc(&dir.join(format!("dst.{ext}")), d)?;
            }
            print_doc(&generated.document);
            Ok(true)
        }
        Command::Corpus { run_all, write } => run_corpus(&style, run_all, &write),
    }
}

/// Refusals of invalid inputs are verdicts; everything else is a usage error.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Invalid(_) | Error::Transport(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
