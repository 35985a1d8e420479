use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use pqdtw_core::series::write_ucr_tsv;
use pqdtw_core::stroke::{parse_strokes, preprocess, DEFAULT_RESAMPLE_POINTS};
use pqdtw_core::{LabeledDataset, Stroke};
use serde_json::Value;

use crate::synth::SketchGenerator;

#[derive(Debug, Clone, Args)]
pub struct PrepareArgs {
    /// Stroke records: a JSON array or one JSON object per line, each with a
    /// symbol id (`symbol`, `key` or `id`) and `strokes`.
    #[arg(required_unless_present = "synthetic")]
    pub input: Option<PathBuf>,
    /// Generate `SYMBOLS:PER_SYMBOL` synthetic sketches instead of reading a file.
    #[arg(long, value_parser = parse_synthetic, conflicts_with = "input")]
    pub synthetic: Option<(usize, usize)>,
    #[arg(short, long, default_value = "strokes.tsv")]
    pub output: PathBuf,
    /// Keep at most this many examples per symbol (first ones in file order).
    #[arg(long)]
    pub max_per_symbol: Option<usize>,
    #[arg(short = 'r', long, default_value_t = DEFAULT_RESAMPLE_POINTS)]
    pub resample_points: usize,
    /// Write the symbol id to display-name map here.
    #[arg(long)]
    pub symbols_out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_synthetic(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected SYMBOLS:PER_SYMBOL, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

/// Counts reported by `prepare`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrepareReport {
    pub records: usize,
    pub kept: usize,
    pub skipped: usize,
    pub capped: usize,
    pub symbols: usize,
}

/// One labelled sketch, or the reason it could not be read.
pub fn parse_record(value: &Value) -> Result<(String, Vec<Stroke>), String> {
    let obj = value.as_object().ok_or("record is not an object")?;
    let symbol = ["symbol", "key", "id"]
        .iter()
        .find_map(|k| obj.get(*k).and_then(Value::as_str))
        .ok_or("record has no symbol id")?
        .to_string();
    let strokes = match obj.get("strokes") {
        Some(Value::String(s)) => parse_strokes(s),
        Some(v @ Value::Array(_)) => parse_strokes(&v.to_string()),
        _ => return Err(format!("record for {symbol} has no strokes")),
    }
    .map_err(|e| e.to_string())?;
    Ok((symbol, strokes))
}

/// Splits the input into JSON values: a top-level array, or one value per line.
pub fn split_records(text: &str) -> Vec<Result<Value, String>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        if let Ok(Value::Array(items)) = serde_json::from_str::<Value>(trimmed) {
            return items.into_iter().map(Ok).collect();
        }
    }
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| e.to_string()))
        .collect()
}

/// Angle-series dataset from labelled sketches, with per-symbol caps.
pub fn prepare(
    records: impl IntoIterator<Item = Result<(String, Vec<Stroke>), String>>,
    resample_points: usize,
    max_per_symbol: Option<usize>,
) -> anyhow::Result<(LabeledDataset, PrepareReport)> {
    let mut report = PrepareReport::default();
    let mut counts: HashMap<String, usize> = HashMap::new();
    let mut series = Vec::new();
    let mut labels = Vec::new();
    for rec in records {
        report.records += 1;
        let Ok((symbol, strokes)) = rec else {
            report.skipped += 1;
            continue;
        };
        let seen = counts.entry(symbol.clone()).or_default();
        if max_per_symbol.is_some_and(|cap| *seen >= cap) {
            report.capped += 1;
            continue;
        }
        match preprocess(&strokes, resample_points) {
            Ok(s) => {
                *seen += 1;
                series.push(s);
                labels.push(symbol);
            }
            Err(_) => report.skipped += 1,
        }
    }
    if series.is_empty() {
        bail!("no usable sketches ({} records, {} skipped)", report.records, report.skipped);
    }
    report.kept = series.len();
    report.symbols = counts.values().filter(|&&c| c > 0).count();
    Ok((LabeledDataset::new(series, Some(labels))?, report))
}

pub fn run(args: &PrepareArgs, out: &mut impl Write) -> anyhow::Result<PrepareReport> {
    let records: Vec<Result<(String, Vec<Stroke>), String>> = match (&args.input, args.synthetic) {
        (_, Some((symbols, per))) => SketchGenerator::new(symbols, args.seed)
            .dataset(per, args.seed.wrapping_add(1))
            .into_iter()
            .map(Ok)
            .collect(),
        (Some(path), None) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            split_records(&text)
                .into_iter()
                .map(|v| v.and_then(|v| parse_record(&v)))
                .collect()
        }
        (None, None) => bail!("pass an input file or --synthetic"),
    };
    let (data, report) = prepare(records, args.resample_points, args.max_per_symbol)?;
    write_ucr_tsv(&args.output, &data).with_context(|| format!("writing {}", args.output.display()))?;
    if let Some(path) = &args.symbols_out {
        let map: BTreeMap<&str, &str> = data
            .labels()
            .unwrap_or_default()
            .iter()
            .map(|l| (l.as_str(), l.as_str()))
            .collect();
        fs::write(path, serde_json::to_string_pretty(&map)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    writeln!(
        out,
        "records: {}, kept: {}, skipped: {}, capped: {}, symbols: {}",
        report.records, report.kept, report.skipped, report.capped, report.symbols
    )?;
    Ok(report)
}
