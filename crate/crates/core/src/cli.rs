//! The `shecke` command-line front end.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::braid::{parse, BraidWord};
use crate::hecke::{self, HeckeElem};
use crate::invariant::{self, InvariantError, InvariantPoly};
use crate::singular::rewrite_to_spanning;
use crate::traces;
use crate::verify::{self, VerifyOptions};

pub const BUILTIN_CATALOG: &str = include_str!("catalog/links.tsv");
pub const CACHE_ENV: &str = "SHECKE_CACHE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_EXPRESSIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "shecke",
    version,
    about = "Invariants of singular links from closed singular braids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Invariant cache file; defaults to $SHECKE_CACHE, then ~/.cache/shecke/invariants.tsv.
    #[arg(long, global = true)]
    pub cache_file: Option<PathBuf>,
    /// Disable the invariant cache file and in-memory trace memoization.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Worker threads for invariant evaluation (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Canonical,
    Raw,
    Resolution,
}

impl Form {
    fn as_str(self) -> &'static str {
        match self {
            Form::Canonical => "canonical",
            Form::Raw => "raw",
            Form::Resolution => "resolution",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invariant of a catalog entry or braid word.
    Invariant {
        input: String,
        #[arg(long, value_enum, default_value_t = Form::Canonical)]
        form: Form,
        /// Print the values of the basis traces instead.
        #[arg(long)]
        basis: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        strands: Option<usize>,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        trials: usize,
    },
    /// Canonical invariants for every entry of a catalog file.
    Table {
        /// Catalog file; the built-in catalog when omitted.
        catalog: Option<PathBuf>,
        #[arg(long, conflicts_with = "tsv")]
        json: bool,
        #[arg(long)]
        tsv: bool,
    },
    /// Values of the basis traces T[0..=d].
    Trace {
        input: String,
        /// Expected number of singular points.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        strands: Option<usize>,
    },
    /// Expansion in the Hecke basis, or in the spanning set when singular.
    Normalform {
        input: String,
        #[arg(long)]
        strands: Option<usize>,
    },
    /// Print the built-in catalog.
    Catalog,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub word: BraidWord,
    pub components: usize,
    pub expected: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("catalog line {line}: {msg}")]
    Catalog { line: usize, msg: String },
    #[error("{0}")]
    NotExpressible(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotExpressible(_) => EXIT_NOT_EXPRESSIBLE,
            CliError::Io(_) => EXIT_FAIL,
            _ => EXIT_USAGE,
        }
    }
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, CliError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let bad = |msg: String| CliError::Catalog { line, msg };
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if !(4..=5).contains(&fields.len()) {
            return Err(bad(format!(
                "expected 4 or 5 tab-separated fields, got {}",
                fields.len()
            )));
        }
        let n: usize = fields[1]
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad strand count `{}`", fields[1])))?;
        let word = parse(fields[2], Some(n)).map_err(|e| bad(e.to_string()))?;
        let components: usize = fields[3]
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad component count `{}`", fields[3])))?;
        if components != word.closure_components() {
            return Err(bad(format!(
                "component count {components} but the closure has {}",
                word.closure_components()
            )));
        }
        let expected = fields
            .get(4)
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty());
        out.push(CatalogEntry {
            name: fields[0].trim().to_string(),
            word,
            components,
            expected,
        });
    }
    Ok(out)
}

pub fn builtin_catalog() -> Vec<CatalogEntry> {
    parse_catalog(BUILTIN_CATALOG).expect("built-in catalog parses")
}

/// Catalog names take precedence over words.
pub fn resolve_input(input: &str, strands: Option<usize>) -> Result<BraidWord, CliError> {
    if let Some(e) = builtin_catalog().into_iter().find(|e| e.name == input) {
        return match strands {
            Some(n) => e
                .word
                .with_strands(n)
                .map_err(|err| CliError::Usage(err.to_string())),
            None => Ok(e.word),
        };
    }
    parse(input, strands).map_err(|e| CliError::Usage(format!("cannot parse `{input}`: {e}")))
}

/// Rendered outputs keyed by `sha256` of the request.
pub struct Cache {
    path: Option<PathBuf>,
    entries: HashMap<String, String>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\")
        .replace('\n', "\\n")
        .replace('\t', "\\t")
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut it = s.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match it.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some(o) => out.push(o),
            None => out.push('\\'),
        }
    }
    out
}

impl Cache {
    pub fn disabled() -> Self {
        Cache {
            path: None,
            entries: HashMap::new(),
        }
    }

    /// Malformed lines are skipped, so a torn final write is harmless.
    pub fn load(path: &Path) -> Self {
        let mut entries = HashMap::new();
        if let Ok(text) = fs::read_to_string(path) {
            for line in text.lines() {
                if let Some((k, v)) = line.split_once('\t') {
                    if k.len() == 64 && k.bytes().all(|b| b.is_ascii_hexdigit()) {
                        entries.insert(k.to_string(), unescape(v));
                    }
                }
            }
        }
        Cache {
            path: Some(path.to_path_buf()),
            entries,
        }
    }

    pub fn key(request: &str) -> String {
        hex::encode(Sha256::digest(request.as_bytes()))
    }

    pub fn get(&self, request: &str) -> Option<&String> {
        self.entries.get(&Cache::key(request))
    }

    pub fn put(&mut self, request: &str, value: &str) -> std::io::Result<()> {
        let key = Cache::key(request);
        if self.entries.contains_key(&key) {
            return Ok(());
        }
        if let Some(path) = &self.path {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            let line = format!("{key}\t{}\n", escape(value));
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            f.write_all(line.as_bytes())?;
        }
        self.entries.insert(key, value.to_string());
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn default_cache_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(p));
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("shecke").join("invariants.tsv"))
}

fn open_cache(g: &GlobalOpts) -> Cache {
    if g.no_cache {
        return Cache::disabled();
    }
    match g.cache_file.clone().or_else(default_cache_path) {
        Some(p) => Cache::load(&p),
        None => Cache::disabled(),
    }
}

fn not_expressible(e: InvariantError) -> CliError {
    CliError::NotExpressible(e.to_string())
}

/// The invariant in the requested form. The resolution form is shown in
/// `(t, x)` when it canonicalizes and in `(s, v)` otherwise.
pub fn invariant_in_form(w: &BraidWord, form: Form) -> Result<InvariantPoly, CliError> {
    match form {
        Form::Canonical => invariant::canonical_invariant(w).map_err(not_expressible),
        Form::Raw => Ok(invariant::invariant_raw(w)),
        Form::Resolution => {
            let p = invariant::resolution_invariant(w);
            Ok(invariant::to_canonical(&p).unwrap_or(p))
        }
    }
}

fn render_invariant(
    w: &BraidWord,
    form: Form,
    basis: bool,
    json: bool,
) -> Result<String, CliError> {
    if basis {
        let values = invariant::basis_invariants(w).map_err(not_expressible)?;
        if json {
            let v = serde_json::json!({
                "word": w.format(),
                "n": w.strands(),
                "d": w.degree(),
                "basis": values.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            });
            return Ok(v.to_string());
        }
        let lines: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(k, c)| format!("I[{k}] = {c}"))
            .collect();
        return Ok(lines.join("\n"));
    }
    let p = invariant_in_form(w, form)?;
    if json {
        let v = serde_json::json!({
            "word": w.format(),
            "n": w.strands(),
            "d": w.degree(),
            "form": form.as_str(),
            "terms": invariant::json_terms(&p),
        });
        return Ok(v.to_string());
    }
    Ok(p.to_string())
}

fn cached_invariant(
    cache: &mut Cache,
    w: &BraidWord,
    form: Form,
    basis: bool,
    json: bool,
) -> Result<String, CliError> {
    let request = format!(
        "invariant\t{}\t{}\t{basis}\t{json}\t{}",
        form.as_str(),
        w.strands(),
        w.format()
    );
    if let Some(hit) = cache.get(&request) {
        return Ok(hit.clone());
    }
    let out = render_invariant(w, form, basis, json)?;
    cache.put(&request, &out)?;
    Ok(out)
}

fn table(
    entries: &[CatalogEntry],
    cache: &mut Cache,
    json: bool,
) -> Result<(String, bool), CliError> {
    let mut ok = true;
    let mut rows = Vec::new();
    for e in entries {
        let value = cached_invariant(cache, &e.word, Form::Canonical, false, false)?;
        if let Some(exp) = &e.expected {
            ok &= *exp == value;
        }
        rows.push((e, value));
    }
    let text = if json {
        let arr: Vec<serde_json::Value> = rows
            .iter()
            .map(|(e, v)| {
                serde_json::json!({
                    "name": e.name,
                    "n": e.word.strands(),
                    "word": e.word.format(),
                    "d": e.word.degree(),
                    "components": e.components,
                    "invariant": v,
                })
            })
            .collect();
        serde_json::Value::Array(arr).to_string()
    } else {
        let mut lines = vec!["# name\tn\td\tcomponents\tinvariant".to_string()];
        for (e, v) in &rows {
            lines.push(format!(
                "{}\t{}\t{}\t{}\t{v}",
                e.name,
                e.word.strands(),
                e.word.degree(),
                e.components
            ));
        }
        lines.join("\n")
    };
    Ok((text, ok))
}

fn trace_lines(w: &BraidWord) -> String {
    traces::trace_vector(w)
        .iter()
        .enumerate()
        .map(|(k, v)| format!("T[{k}] = {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn normalform(w: &BraidWord) -> Result<String, CliError> {
    if w.degree() == 0 {
        let e = HeckeElem::from_word(w).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(e.to_string())
    } else {
        Ok(rewrite_to_spanning(w).to_string())
    }
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let memo = hecke::trace_cache_enabled();
    if cli.global.no_cache {
        hecke::set_trace_cache(false);
    }
    let mut obuf: Vec<u8> = Vec::new();
    let mut ebuf: Vec<u8> = Vec::new();
    let mut run = || dispatch(cli, &mut obuf, &mut ebuf);
    let result = if cli.global.jobs == 0 {
        run()
    } else {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.jobs)
            .build()
        {
            Ok(pool) => pool.install(run),
            Err(e) => Err(CliError::Usage(e.to_string())),
        }
    };
    hecke::set_trace_cache(memo);
    let _ = out.write_all(&obuf);
    let _ = err.write_all(&ebuf);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Invariant {
            input,
            form,
            basis,
            json,
            strands,
        } => {
            let w = resolve_input(input, *strands)?;
            let mut cache = open_cache(&cli.global);
            let text = cached_invariant(&mut cache, &w, *form, *basis, *json)?;
            writeln!(out, "{text}")?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            suite,
            d,
            n,
            seed,
            trials,
        } => {
            let opts = VerifyOptions {
                d: *d,
                n: *n,
                seed: *seed,
                trials: *trials,
            };
            let rep =
                verify::run_suite(suite, &opts).map_err(|e| CliError::Usage(e.to_string()))?;
            writeln!(out, "{rep}")?;
            Ok(if rep.passed() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Table { catalog, json, .. } => {
            let entries = match catalog {
                Some(p) => parse_catalog(&fs::read_to_string(p)?)?,
                None => builtin_catalog(),
            };
            let mut cache = open_cache(&cli.global);
            let (text, ok) = table(&entries, &mut cache, *json)?;
            writeln!(out, "{text}")?;
            if !ok {
                writeln!(
                    err,
                    "error: some entries differ from their expected invariant"
                )?;
                return Ok(EXIT_FAIL);
            }
            Ok(EXIT_OK)
        }
        Command::Trace { input, d, strands } => {
            let w = resolve_input(input, *strands)?;
            if let Some(d) = d {
                if *d != w.degree() {
                    return Err(CliError::Usage(format!(
                        "`{}` has {} singular points, not {d}",
                        w.format(),
                        w.degree()
                    )));
                }
            }
            writeln!(out, "{}", trace_lines(&w))?;
            Ok(EXIT_OK)
        }
        Command::Normalform { input, strands } => {
            let w = resolve_input(input, *strands)?;
            writeln!(out, "{}", normalform(&w)?)?;
            Ok(EXIT_OK)
        }
        Command::Catalog => {
            write!(out, "{BUILTIN_CATALOG}")?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping_round_trips() {
        for s in ["plain", "a\nb", "tab\there", "back\\slash\\n"] {
            assert_eq!(unescape(&escape(s)), s);
            assert!(!escape(s).contains('\n'));
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), EXIT_USAGE);
        assert_eq!(
            CliError::Catalog {
                line: 1,
                msg: "x".into()
            }
            .exit_code(),
            EXIT_USAGE
        );
        assert_eq!(
            CliError::NotExpressible("r".into()).exit_code(),
            EXIT_NOT_EXPRESSIBLE
        );
    }

    #[test]
    fn catalog_names_shadow_words() {
        assert_eq!(resolve_input("trefoil", None).unwrap().format(), "s1^3");
        assert_eq!(resolve_input("unknot", Some(3)).unwrap().strands(), 3);
        assert_eq!(resolve_input("s2", None).unwrap().strands(), 3);
    }

    #[test]
    fn in_process_run_matches() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with_args(
            ["shecke", "--no-cache", "invariant", "hopf+"],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_OK);
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "1*t*x^-1 + -1*t^3*x^-1 + 1*t*x\n"
        );
    }
}
