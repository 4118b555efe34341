//! Report building behind the `rhom` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use rhom::format::{Format, Kind, TableFile};
use rhom::{
    chi_squared, cramers_v, degree_of_dependence_ea, full_dep_candidates, mutual_information,
    nats_to_bits, pearson_rho, phi_coefficient, phi_style_component_distance, rho_m,
    tschuprow_t, two_proportion, Axis, Error, Support, Table, TwoProportionInput, Variant,
};

/// Every measure the CLI knows, in report order.
pub const MEASURES: [&str; 12] = [
    "phi",
    "component_distance",
    "pearson",
    "rho_m",
    "hellinger_independence",
    "mi",
    "chi2",
    "ea",
    "cramers_v",
    "tschuprow_t",
    "two_proportion",
    "spearman",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Nats,
    Bits,
}

impl std::str::FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nats" => Ok(LogBase::Nats),
            "bits" => Ok(LogBase::Bits),
            other => Err(format!("unknown log base {other:?} (expected nats or bits)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Md,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "md" => Ok(OutputFormat::Md),
            other => Err(format!("unknown output format {other:?} (expected json, csv or md)")),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub format: Option<Format>,
    pub kind: Option<Kind>,
    /// `None` selects every measure applicable to the input.
    pub measures: Option<Vec<String>>,
    pub default_supports: bool,
    pub variant: Variant,
    pub log_base: LogBase,
    pub sample_size: Option<f64>,
}

/// One measure's outcome: a value or a structured error, never both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureEntry {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub metadata: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub input: String,
    /// SHA-256 of the input bytes.
    pub input_digest: String,
    pub dims: [usize; 2],
    /// The normalized table in the JSON input format; re-analyzing it
    /// reproduces every value bit for bit.
    pub table: Value,
    pub measures: Vec<MeasureEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

impl MeasureReport {
    pub fn measure(&self, name: &str) -> Option<&MeasureEntry> {
        self.measures.iter().find(|m| m.name == name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.measure(name).and_then(|m| m.value)
    }
}

/// Failure that prevents any report from being produced.
#[derive(Debug, thiserror::Error)]
pub enum AnalyzeError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] Error),
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn analyze_path(path: &Path, opts: &AnalyzeOptions) -> Result<MeasureReport, AnalyzeError> {
    let bytes = std::fs::read(path)
        .map_err(|e| AnalyzeError::Io(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| AnalyzeError::Data(Error::Parse("input is not UTF-8".into())))?;
    let format = match opts.format.or_else(|| Format::from_path(path)) {
        Some(f) => f,
        None => {
            return Err(AnalyzeError::Usage(format!(
                "cannot infer the format of {}; pass --format",
                path.display()
            )))
        }
    };
    let mut report = analyze_text(&text, format, opts)?;
    report.input = path.display().to_string();
    report.input_digest = digest(&bytes);
    Ok(report)
}

pub fn analyze_text(
    text: &str,
    format: Format,
    opts: &AnalyzeOptions,
) -> Result<MeasureReport, AnalyzeError> {
    let file = TableFile::parse(text, format, opts.kind)?;
    let table: Table = file.table()?;
    let sample_size = opts.sample_size.or_else(|| file.implied_sample_size());
    if let Some(n) = sample_size {
        if !(n > 0.0 && n.is_finite()) {
            return Err(AnalyzeError::Usage(format!("sample size must be positive, got {n}")));
        }
    }
    let support = match file.support::<f64>() {
        Some(s) => Some(s?),
        None if opts.default_supports => Some(Support::ordinal(table.rows(), table.cols())),
        None => None,
    };

    let requested: Vec<String> = match &opts.measures {
        Some(list) => {
            for m in list {
                if !MEASURES.contains(&m.as_str()) {
                    return Err(AnalyzeError::Usage(format!(
                        "unknown measure {m:?}; known: {}",
                        MEASURES.join(",")
                    )));
                }
            }
            let mut seen = Vec::new();
            for m in list {
                if !seen.contains(m) {
                    seen.push(m.clone());
                }
            }
            seen
        }
        None => applicable(&table, support.is_some(), sample_size)
            .into_iter()
            .map(str::to_owned)
            .collect(),
    };

    let ctx = Ctx {
        table: &table,
        support: support.as_ref(),
        sample_size,
        opts,
    };
    let mut warnings = Vec::new();
    let measures = requested
        .iter()
        .map(|name| ctx.compute(name, &mut warnings))
        .collect();

    let normalized = TableFile {
        kind: Kind::Probs,
        matrix: table.to_nested(),
        row_labels: table.row_labels().map(<[String]>::to_vec),
        col_labels: table.col_labels().map(<[String]>::to_vec),
        values_x: file.values_x.clone(),
        values_y: file.values_y.clone(),
        sample_size,
    };

    Ok(MeasureReport {
        input: String::from("-"),
        input_digest: digest(text.as_bytes()),
        dims: [table.rows(), table.cols()],
        table: normalized.to_json_value(),
        measures,
        warnings,
    })
}

fn applicable(table: &Table, has_support: bool, sample_size: Option<f64>) -> Vec<&'static str> {
    let two_by_two = table.shape() == (2, 2);
    MEASURES
        .into_iter()
        .filter(|&m| match m {
            "phi" | "component_distance" => two_by_two,
            "two_proportion" => two_by_two && sample_size.is_some(),
            "pearson" => has_support,
            "chi2" | "cramers_v" | "tschuprow_t" => sample_size.is_some(),
            "spearman" => false,
            _ => true,
        })
        .collect()
}

struct Ctx<'a> {
    table: &'a Table,
    support: Option<&'a Support>,
    sample_size: Option<f64>,
    opts: &'a AnalyzeOptions,
}

impl Ctx<'_> {
    fn need_n(&self) -> Result<f64, String> {
        self.sample_size
            .ok_or_else(|| "requires a sample size: use count input or --sample-size".to_string())
    }

    fn compute(&self, name: &str, warnings: &mut Vec<String>) -> MeasureEntry {
        let mut metadata = BTreeMap::new();
        let outcome: Result<f64, String> = (|| {
            let t = self.table;
            let e = |err: Error| err.to_string();
            match name {
                "phi" => phi_coefficient(t).map_err(e),
                "component_distance" => phi_style_component_distance(t).map_err(e),
                "pearson" => {
                    let s = self.support.ok_or(
                        "requires numeric supports: values_x/values_y in the input or --default-supports",
                    )?;
                    metadata.insert("values_x".into(), json!(s.values_x()));
                    metadata.insert("values_y".into(), json!(s.values_y()));
                    pearson_rho(t, s).map_err(e)
                }
                "rho_m" => {
                    let r = rho_m(t, self.opts.variant).map_err(e)?;
                    metadata.insert("variant".into(), json!(r.variant.as_str()));
                    metadata.insert("numerator".into(), json!(r.numerator));
                    metadata.insert("denominator".into(), json!(r.denominator));
                    metadata.insert("candidate_counts".into(), json!(r.candidate_counts));
                    metadata.insert("x_distances".into(), json!(r.x_distances));
                    metadata.insert("y_distances".into(), json!(r.y_distances));
                    if r.candidate_counts != (1, 1) {
                        let sites = |axis| -> Vec<usize> {
                            full_dep_candidates(t, axis)
                                .map(|c| c.tie_sites.iter().map(|s| s.state).collect())
                                .unwrap_or_default()
                        };
                        let (rows, cols) = (sites(Axis::X), sites(Axis::Y));
                        metadata.insert("tie_rows".into(), json!(rows));
                        metadata.insert("tie_cols".into(), json!(cols));
                        warnings.push(format!(
                            "rho_m: ties branched into {} X and {} Y candidates (rows {:?}, columns {:?})",
                            r.candidate_counts.0, r.candidate_counts.1, rows, cols
                        ));
                    }
                    if r.exceeds_one() {
                        metadata.insert("exceeds_one".into(), json!(true));
                        warnings.push(format!("rho_m = {} exceeds 1", r.value));
                    }
                    Ok(r.value)
                }
                "hellinger_independence" => {
                    rhom::hellinger(&t.independence_product(), t).map_err(e)
                }
                "mi" => {
                    let nats = mutual_information(t);
                    let (v, unit) = match self.opts.log_base {
                        LogBase::Nats => (nats, "nats"),
                        LogBase::Bits => (nats_to_bits(nats), "bits"),
                    };
                    metadata.insert("unit".into(), json!(unit));
                    Ok(v)
                }
                "chi2" => chi_squared(t, self.need_n()?).map_err(e),
                "ea" => degree_of_dependence_ea(t).map_err(e),
                "cramers_v" => cramers_v(t, self.need_n()?).map_err(e),
                "tschuprow_t" => tschuprow_t(t, self.need_n()?).map_err(e),
                "two_proportion" => {
                    let n = self.need_n()?;
                    if n.fract() != 0.0 {
                        return Err(format!("sample size {n} is not a whole number"));
                    }
                    let input = TwoProportionInput::from_table(t, n as u64).map_err(e)?;
                    let r = two_proportion(&input);
                    metadata.insert("z".into(), json!(r.z));
                    metadata.insert("p1".into(), json!(input.p1));
                    metadata.insert("q1".into(), json!(input.q1));
                    metadata.insert("p".into(), json!(input.p));
                    metadata.insert("a".into(), json!(input.a));
                    metadata.insert("b".into(), json!(input.b));
                    Ok(r.factor)
                }
                "spearman" => Err("requires paired observations, not a joint table".into()),
                _ => unreachable!("measure names are validated"),
            }
        })();
        match outcome {
            Ok(v) => MeasureEntry {
                name: name.to_owned(),
                value: Some(v),
                error: None,
                metadata,
            },
            Err(msg) => MeasureEntry {
                name: name.to_owned(),
                value: None,
                error: Some(msg),
                metadata: BTreeMap::new(),
            },
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn render(report: &MeasureReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut s = String::from("input,measure,value,error\n");
            for m in &report.measures {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    csv_field(&report.input),
                    m.name,
                    m.value.map(|v| v.to_string()).unwrap_or_default(),
                    csv_field(m.error.as_deref().unwrap_or(""))
                );
            }
            s
        }
        OutputFormat::Md => {
            let mut s = format!(
                "### {} ({}x{})\n\n| measure | value | note |\n|---|---|---|\n",
                report.input, report.dims[0], report.dims[1]
            );
            for m in &report.measures {
                let value = m.value.map(|v| format!("{v:.6}")).unwrap_or_default();
                let note = match (&m.error, m.metadata.get("variant")) {
                    (Some(err), _) => format!("error: {err}"),
                    (None, Some(v)) => format!("variant {}", v.as_str().unwrap_or("")),
                    _ => String::new(),
                };
                let _ = writeln!(s, "| {} | {} | {} |", m.name, value, note);
            }
            for w in &report.warnings {
                let _ = writeln!(s, "\n> {w}");
            }
            s.push('\n');
            s
        }
    }
}

/// Table files in `dir` (`.csv` or `.json`), sorted by file name.
pub fn batch_inputs(dir: &Path) -> std::io::Result<Vec<std::path::PathBuf>> {
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && Format::from_path(p).is_some())
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// A per-file failure in batch mode, emitted in place of that file's report.
pub fn batch_error(path: &Path, err: &AnalyzeError) -> Value {
    json!({ "input": path.display().to_string(), "error": err.to_string() })
}
