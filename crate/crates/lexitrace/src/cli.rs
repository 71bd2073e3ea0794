//! Command-line front end. [`run`] takes the argument vector and output
//! streams and returns the process exit code:
//!
//! * `0` success (warnings may have been printed)
//! * `1` validation errors in otherwise readable input
//! * `2` usage errors, unreadable files, malformed files

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lexitrace_core::annotation::{validate_annotations, AnnotationSet};
use lexitrace_core::corpus::{LegalDocument, ProvisionRef};
use lexitrace_core::diagnostic::{has_errors, Diagnostic};
use lexitrace_core::model::{self, check_model, ContentModel, ForwardTrace, SpecDerivation};
use lexitrace_core::scoring::{aggregate_scores, compare_components, score_sets, Aliases};
use lexitrace_core::survey::{aggregate_survey, validate_survey};

use crate::formats::annotations::parse_annotations;
use crate::formats::corpus::{parse_corpus, serialize_corpus};
use crate::formats::model::{parse_aliases, parse_declarations, parse_model, serialize_model};
use crate::formats::reports::{self, ScoreRow, ScoreTable};
use crate::formats::survey::{parse_survey, serialize_survey};
use crate::formats::FormatError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "lexitrace", version, about = "Annotate regulatory text and trace it to requirements and components")]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a corpus and list its provisions.
    Parse { corpus: PathBuf },
    /// Check annotation files against a corpus.
    Validate {
        corpus: PathBuf,
        #[arg(required = true)]
        annotations: Vec<PathBuf>,
    },
    /// Build or check content models.
    #[command(subcommand)]
    Model(ModelCommand),
    /// List the requirements and system components of a model.
    Derive { model: PathBuf },
    /// Trace between provisions and model instances.
    Trace(TraceArgs),
    /// Report which body-text provisions are covered by bound annotations.
    Coverage { model: PathBuf, corpus: PathBuf },
    /// Score candidate annotation sets against a gold set.
    Score(ScoreArgs),
    /// Validate or summarize survey ratings and rankings.
    Survey {
        file: PathBuf,
        #[arg(long)]
        aggregate: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ModelCommand {
    /// Build a model from annotation files and a declarations file.
    Build {
        corpus: PathBuf,
        /// Annotation files followed by the declarations file.
        #[arg(required = true, num_args = 2.., value_name = "ANNOTATIONS... DECLS")]
        inputs: Vec<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a model file.
    Check { model: PathBuf },
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("direction").required(true))]
struct TraceArgs {
    model: PathBuf,
    /// Provision to trace forward from, e.g. GDPR:Art15(1).
    #[arg(long, group = "direction")]
    from: Option<String>,
    /// Instance id to trace backward from.
    #[arg(long, group = "direction")]
    to: Option<String>,
    /// Provision-by-instance matrix (needs --corpus).
    #[arg(long, group = "direction", requires = "corpus")]
    matrix: bool,
    /// Corpus to resolve provisions against.
    #[arg(long)]
    corpus: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScoreArgs {
    corpus: PathBuf,
    gold: PathBuf,
    #[arg(required = true)]
    candidates: Vec<PathBuf>,
    /// Gold model followed by candidate models, matched to candidates by author.
    #[arg(long, num_args = 2.., value_name = "GOLD_MODEL CANDIDATE_MODEL...")]
    components: Option<Vec<PathBuf>>,
    /// Component name alias groups.
    #[arg(long, requires = "components")]
    aliases: Option<PathBuf>,
    /// Append median and mode rows.
    #[arg(long)]
    aggregate: bool,
}

/// Failure that ends a command early.
enum Failure {
    Usage(String),
    Invalid(Vec<Diagnostic>),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<Output, Failure>;

/// Report text plus diagnostics that did not stop the command.
#[derive(Default)]
struct Output {
    stdout: String,
    diagnostics: Vec<Diagnostic>,
}

impl Output {
    fn text(stdout: String) -> Self {
        Output { stdout, diagnostics: Vec::new() }
    }
}

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                EXIT_OK
            };
        }
    };
    let result = dispatch(cli.command, cli.format);
    let code = match result {
        Ok(out) => {
            let _ = stdout.write_all(out.stdout.as_bytes());
            write_diagnostics(stderr, &out.diagnostics);
            if has_errors(&out.diagnostics) {
                EXIT_INVALID
            } else {
                EXIT_OK
            }
        }
        Err(Failure::Invalid(diags)) => {
            write_diagnostics(stderr, &diags);
            EXIT_INVALID
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    };
    let _ = stdout.flush();
    code
}

fn write_diagnostics(stderr: &mut dyn Write, diags: &[Diagnostic]) {
    for d in diags {
        let _ = writeln!(stderr, "{d}");
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: Result<T, FormatError>) -> Result<T, Failure> {
    r.map_err(|e| {
        if e.is_syntax() {
            Failure::Usage(format!("{}: {e}", path.display()))
        } else {
            Failure::Invalid(vec![Diagnostic::error(path.display().to_string(), "invalid", e.to_string())])
        }
    })
}

fn load_corpus(path: &Path) -> Result<LegalDocument, Failure> {
    in_file(path, parse_corpus(&read(path)?))
}

fn load_set(path: &Path) -> Result<AnnotationSet, Failure> {
    in_file(path, parse_annotations(&read(path)?))
}

fn load_model(path: &Path) -> Result<ContentModel, Failure> {
    in_file(path, parse_model(&read(path)?))
}

/// Loads a model and fails on any error-severity diagnostic.
fn load_checked_model(path: &Path) -> Result<(ContentModel, Vec<Diagnostic>), Failure> {
    let m = load_model(path)?;
    let diags = check_model(&m);
    if has_errors(&diags) {
        return Err(Failure::Invalid(diags));
    }
    Ok((m, diags))
}

fn checked_set(path: &Path, doc: &LegalDocument) -> Result<AnnotationSet, Failure> {
    let set = load_set(path)?;
    let diags = validate_annotations(&set, doc);
    if has_errors(&diags) {
        return Err(Failure::Invalid(diags));
    }
    Ok(set)
}

fn parse_ref(s: &str) -> Result<ProvisionRef, Failure> {
    s.parse().map_err(|e| Failure::Usage(format!("{e}")))
}

fn not_tabular(cmd: &str, format: Format) -> Result<(), Failure> {
    if format == Format::Csv {
        return Err(Failure::Usage(format!("{cmd} has no csv output; use text or json")));
    }
    Ok(())
}

fn dispatch(cmd: Command, format: Format) -> CmdResult {
    match cmd {
        Command::Parse { corpus } => cmd_parse(&corpus, format),
        Command::Validate { corpus, annotations } => cmd_validate(&corpus, &annotations),
        Command::Model(ModelCommand::Build { corpus, inputs, output }) => cmd_build(&corpus, &inputs, &output),
        Command::Model(ModelCommand::Check { model }) => {
            let m = load_model(&model)?;
            Ok(Output { stdout: String::new(), diagnostics: check_model(&m) })
        }
        Command::Derive { model } => cmd_derive(&model, format),
        Command::Trace(args) => cmd_trace(args, format),
        Command::Coverage { model, corpus } => cmd_coverage(&model, &corpus, format),
        Command::Score(args) => cmd_score(args, format),
        Command::Survey { file, aggregate } => cmd_survey(&file, aggregate, format),
    }
}

fn cmd_parse(path: &Path, format: Format) -> CmdResult {
    let doc = load_corpus(path)?;
    Ok(Output::text(match format {
        Format::Json => serialize_corpus(&doc),
        _ => doc.list_provisions().iter().map(|r| format!("{r}\n")).collect(),
    }))
}

fn cmd_validate(corpus: &Path, files: &[PathBuf]) -> CmdResult {
    let doc = load_corpus(corpus)?;
    let mut diagnostics = Vec::new();
    for f in files {
        let set = load_set(f)?;
        diagnostics.extend(validate_annotations(&set, &doc));
    }
    Ok(Output { stdout: String::new(), diagnostics })
}

fn cmd_build(corpus: &Path, inputs: &[PathBuf], output: &Path) -> CmdResult {
    let doc = load_corpus(corpus)?;
    let (decls_path, set_paths) = inputs.split_last().expect("clap enforces two or more inputs");
    let sets = set_paths.iter().map(|p| load_set(p)).collect::<Result<Vec<_>, _>>()?;
    let decls = in_file(decls_path, parse_declarations(&read(decls_path)?))?;
    let m = model::build_model(&sets, &decls, &doc).map_err(|e| Failure::Invalid(vec![e.to_diagnostic()]))?;
    fs::write(output, serialize_model(&m)).map_err(|e| Failure::Usage(format!("{}: {e}", output.display())))?;
    Ok(Output { stdout: String::new(), diagnostics: check_model(&m) })
}

#[derive(serde::Serialize)]
struct InstanceJson<'a> {
    id: &'a str,
    name: &'a str,
    concept: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    indirect: Option<bool>,
}

fn instances_json(v: &[model::Instance]) -> Vec<InstanceJson<'_>> {
    v.iter().map(|i| InstanceJson { id: &i.id, name: &i.name, concept: i.concept.tag(), indirect: None }).collect()
}

fn traced_json<'a>(m: &ContentModel, v: &'a [model::TracedInstance]) -> Vec<InstanceJson<'a>> {
    v.iter()
        .map(|i| InstanceJson {
            id: &i.id,
            name: &i.name,
            concept: m.instance(&i.id).map_or("", |x| x.concept.tag()),
            indirect: Some(i.indirect),
        })
        .collect()
}

fn derivation_text(d: &SpecDerivation) -> String {
    let mut s = String::new();
    for (label, list) in [("requirements", &d.requirements), ("components", &d.components)] {
        let _ = writeln!(s, "{label}: {}", list.len());
        for i in list {
            let _ = writeln!(s, "  {}  {} ({})", i.id, i.name, i.concept.tag());
        }
    }
    s
}

fn cmd_derive(path: &Path, format: Format) -> CmdResult {
    not_tabular("derive", format)?;
    let (m, diagnostics) = load_checked_model(path)?;
    let d = model::derive_specs(&m).map_err(|e| Failure::Invalid(e.0))?;
    let stdout = match format {
        Format::Json => crate::formats::to_json(&serde_json::json!({
            "requirements": instances_json(&d.requirements),
            "components": instances_json(&d.components),
        })),
        _ => derivation_text(&d),
    };
    Ok(Output { stdout, diagnostics })
}

fn forward_text(t: &ForwardTrace) -> String {
    let mut s = String::new();
    for (label, list) in [("requirements", &t.requirements), ("components", &t.components)] {
        let _ = writeln!(s, "{label}: {}", list.len());
        for i in list {
            let via = if i.indirect { "  [indirect]" } else { "" };
            let _ = writeln!(s, "  {}  {}{via}", i.id, i.name);
        }
    }
    s
}

fn cmd_trace(args: TraceArgs, format: Format) -> CmdResult {
    let (m, diagnostics) = load_checked_model(&args.model)?;
    let doc = args.corpus.as_deref().map(load_corpus).transpose()?;
    let trace_err = |e: model::TraceError| Failure::Usage(e.to_string());
    let stdout = if let Some(from) = &args.from {
        not_tabular("trace --from", format)?;
        let target = parse_ref(from)?;
        let t = match &doc {
            Some(doc) => model::trace_forward(&m, doc, &target),
            None => m.trace_forward(&target),
        }
        .map_err(trace_err)?;
        match format {
            Format::Json => crate::formats::to_json(&serde_json::json!({
                "provision": target.to_string(),
                "requirements": traced_json(&m, &t.requirements),
                "components": traced_json(&m, &t.components),
            })),
            _ => forward_text(&t),
        }
    } else if let Some(to) = &args.to {
        not_tabular("trace --to", format)?;
        let refs = model::trace_backward(&m, to).map_err(trace_err)?;
        match format {
            Format::Json => crate::formats::to_json(&refs.iter().map(ToString::to_string).collect::<Vec<_>>()),
            _ => refs.iter().map(|r| format!("{r}\n")).collect(),
        }
    } else {
        let doc = doc.expect("clap requires --corpus with --matrix");
        if doc.id != m.corpus_id {
            return Err(Failure::Usage(format!(
                "model is built on corpus {:?} but the corpus file is {:?}",
                m.corpus_id, doc.id
            )));
        }
        let matrix = model::trace_matrix(&m, &doc);
        match format {
            Format::Json => reports::trace_matrix_json(&matrix),
            _ => reports::trace_matrix_csv(&matrix),
        }
    };
    Ok(Output { stdout, diagnostics })
}

fn cmd_coverage(model_path: &Path, corpus: &Path, format: Format) -> CmdResult {
    not_tabular("coverage", format)?;
    let (m, diagnostics) = load_checked_model(model_path)?;
    let doc = load_corpus(corpus)?;
    if doc.id != m.corpus_id {
        return Err(Failure::Usage(format!(
            "model is built on corpus {:?} but the corpus file is {:?}",
            m.corpus_id, doc.id
        )));
    }
    let c = model::coverage(&m, &doc);
    let strings = |v: &[ProvisionRef]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let stdout = match format {
        Format::Json => crate::formats::to_json(&serde_json::json!({
            "covered": strings(&c.covered),
            "uncovered": strings(&c.uncovered),
            "ratio": c.ratio.to_string(),
        })),
        _ => {
            let mut s =
                format!("covered: {} of {} ({})\n", c.covered.len(), c.covered.len() + c.uncovered.len(), c.ratio);
            for r in &c.uncovered {
                let _ = writeln!(s, "uncovered {r}");
            }
            s
        }
    };
    Ok(Output { stdout, diagnostics })
}

fn cmd_score(args: ScoreArgs, format: Format) -> CmdResult {
    let doc = load_corpus(&args.corpus)?;
    let gold = checked_set(&args.gold, &doc)?;
    let candidates = args.candidates.iter().map(|p| checked_set(p, &doc)).collect::<Result<Vec<_>, _>>()?;
    let aliases = match &args.aliases {
        Some(p) => in_file(p, parse_aliases(&read(p)?))?,
        None => Aliases::default(),
    };
    let mut diagnostics = Vec::new();
    let mut comparisons: Vec<Option<_>> = vec![None; candidates.len()];
    if let Some(paths) = &args.components {
        let (gold_model, _) = load_checked_model(&paths[0])?;
        for p in &paths[1..] {
            let (cm, _) = load_checked_model(p)?;
            let authors: Vec<&str> = cm.annotation_sets.iter().map(|s| s.author.as_str()).collect();
            match candidates.iter().position(|c| authors.contains(&c.author.as_str())) {
                Some(i) => comparisons[i] = Some(compare_components(&cm, &gold_model, &aliases)),
                None => diagnostics.push(Diagnostic::warning(
                    p.display().to_string(),
                    "unmatched-model",
                    "no candidate annotation set shares an author with this model",
                )),
            }
        }
    }
    let mut rows = Vec::with_capacity(candidates.len());
    for (cand, components) in candidates.iter().zip(comparisons) {
        let report = score_sets(cand, &gold).map_err(|e| Failure::Usage(e.to_string()))?;
        rows.push(ScoreRow { report, components });
    }
    let aggregate = if args.aggregate {
        let reports: Vec<_> = rows.iter().map(|r| r.report.clone()).collect();
        Some(aggregate_scores(&reports).map_err(|e| Failure::Usage(e.to_string()))?)
    } else {
        None
    };
    let table = ScoreTable { rows, aggregate };
    let stdout = match format {
        Format::Json => reports::score_table_json(&table),
        _ => reports::score_table_csv(&table),
    };
    Ok(Output { stdout, diagnostics })
}

fn cmd_survey(path: &Path, aggregate: bool, format: Format) -> CmdResult {
    let ds = in_file(path, parse_survey(&read(path)?))?;
    let diagnostics = validate_survey(&ds);
    let stdout = if aggregate {
        let summary = aggregate_survey(&ds).map_err(|_| Failure::Usage("survey has no records".to_string()))?;
        match format {
            Format::Json => reports::survey_summary_json(&summary),
            _ => reports::survey_summary_csv(&summary),
        }
    } else {
        match format {
            Format::Json => return Err(Failure::Usage("survey without --aggregate has csv output only".into())),
            _ => serialize_survey(&ds),
        }
    };
    Ok(Output { stdout, diagnostics })
}
