//! Mention-count ingestion and size-frequency histograms.
//!
//! Input files are delimiter-separated text whose header names any of the
//! columns `doi,twitter,facebook,news,blog,alt_score` (extra columns are
//! ignored). Rows without a DOI are dropped, malformed rows are collected
//! and skipped, and every surviving record keeps its per-platform counts so
//! funnel statistics can be reported alongside the fits.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A mention source tracked per publication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Platform {
    Twitter,
    Facebook,
    News,
    Blog,
    AltScore,
}

impl Platform {
    pub const ALL: [Platform; 5] = [
        Platform::Twitter,
        Platform::Facebook,
        Platform::News,
        Platform::Blog,
        Platform::AltScore,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Platform::Twitter => "twitter",
            Platform::Facebook => "facebook",
            Platform::News => "news",
            Platform::Blog => "blog",
            Platform::AltScore => "alt_score",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Platform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_lowercase();
        Platform::ALL
            .into_iter()
            .find(|p| p.name() == wanted)
            .ok_or_else(|| Error::UnknownPlatform(s.to_string()))
    }
}

/// One publication: its DOI and a non-negative mention count per platform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionRecord {
    pub doi: String,
    counts: [u64; 5],
}

impl MentionRecord {
    pub fn new(doi: impl Into<String>) -> Self {
        MentionRecord {
            doi: doi.into(),
            counts: [0; 5],
        }
    }

    pub fn with(mut self, platform: Platform, count: u64) -> Self {
        self.counts[platform.index()] = count;
        self
    }

    pub fn count(&self, platform: Platform) -> u64 {
        self.counts[platform.index()]
    }

    pub fn set_count(&mut self, platform: Platform, count: u64) {
        self.counts[platform.index()] = count;
    }

    pub fn has_any_mention(&self) -> bool {
        self.counts.iter().any(|&c| c > 0)
    }
}

/// Funnel counts gathered during ingest.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestSummary {
    /// Well-formed rows read, with or without a DOI.
    pub total_records: u64,
    pub records_with_doi: u64,
    pub records_with_any_mention: u64,
    /// Rows that could not be parsed; not included in `total_records`.
    pub malformed_rows: u64,
    pub per_platform_nonzero: BTreeMap<Platform, u64>,
}

impl IngestSummary {
    pub fn nonzero(&self, platform: Platform) -> u64 {
        self.per_platform_nonzero
            .get(&platform)
            .copied()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

/// Everything `ingest` produces.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub records: Vec<MentionRecord>,
    pub summary: IngestSummary,
    pub row_errors: Vec<RowError>,
    /// Hex SHA-256 of the raw input bytes.
    pub digest: String,
}

/// Reads a record file from disk. See [`ingest_bytes`].
pub fn ingest(path: impl AsRef<Path>) -> Result<Ingested> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ingest_bytes(&bytes)
}

pub fn ingest_bytes(bytes: &[u8]) -> Result<Ingested> {
    let digest = hex::encode(Sha256::digest(bytes));
    let mut out = Ingested {
        records: Vec::new(),
        summary: IngestSummary::default(),
        row_errors: Vec::new(),
        digest,
    };
    let first_line = bytes.split(|&b| b == b'\n').next().unwrap_or_default();
    if first_line.iter().all(|b| b.is_ascii_whitespace()) {
        return Ok(out);
    }

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(detect_delimiter(first_line))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);

    let headers = reader
        .headers()
        .map_err(|e| Error::Parse(format!("header: {e}")))?
        .clone();
    let mut doi_col = None;
    let mut platform_cols = Vec::new();
    for (i, name) in headers.iter().enumerate() {
        let name = name.trim_start_matches('\u{feff}').to_ascii_lowercase();
        if name == "doi" {
            doi_col = Some(i);
        } else if let Ok(p) = name.parse::<Platform>() {
            platform_cols.push((i, p));
        }
    }
    let doi_col = doi_col.ok_or_else(|| Error::Parse("header has no 'doi' column".into()))?;
    let width = headers.len();

    for row in reader.records() {
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                out.row_errors.push(RowError {
                    line,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != width {
            out.row_errors.push(RowError {
                line,
                message: format!("expected {width} fields, found {}", row.len()),
            });
            continue;
        }
        match parse_row(&row, doi_col, &platform_cols) {
            Ok(record) => {
                out.summary.total_records += 1;
                if record.doi.is_empty() {
                    continue;
                }
                out.summary.records_with_doi += 1;
                if record.has_any_mention() {
                    out.summary.records_with_any_mention += 1;
                }
                for p in Platform::ALL {
                    if record.count(p) > 0 {
                        *out.summary.per_platform_nonzero.entry(p).or_default() += 1;
                    }
                }
                out.records.push(record);
            }
            Err(message) => out.row_errors.push(RowError { line, message }),
        }
    }
    out.summary.malformed_rows = out.row_errors.len() as u64;
    Ok(out)
}

fn detect_delimiter(header: &[u8]) -> u8 {
    if header.contains(&b',') {
        b','
    } else if header.contains(&b'\t') {
        b'\t'
    } else if header.contains(&b';') {
        b';'
    } else {
        b','
    }
}

fn parse_row(
    row: &csv::StringRecord,
    doi_col: usize,
    platform_cols: &[(usize, Platform)],
) -> std::result::Result<MentionRecord, String> {
    let mut record = MentionRecord::new(row.get(doi_col).unwrap_or_default());
    for &(col, platform) in platform_cols {
        let field = row.get(col).unwrap_or_default();
        let count = parse_count(field, platform)
            .ok_or_else(|| format!("bad {platform} count '{field}'"))?;
        record.set_count(platform, count);
    }
    Ok(record)
}

/// Empty means zero. Alt-score may be fractional and is rounded half-up.
fn parse_count(field: &str, platform: Platform) -> Option<u64> {
    if field.is_empty() {
        return Some(0);
    }
    if let Ok(n) = field.parse::<u64>() {
        return Some(n);
    }
    if platform == Platform::AltScore {
        let x: f64 = field.parse().ok()?;
        if x.is_finite() && (0.0..1.8e19).contains(&x) {
            return Some((x + 0.5).floor() as u64);
        }
    }
    None
}

/// Size-frequency distribution: k -> N(k), the number of papers with exactly
/// k mentions. Only levels k >= 1 with N(k) > 0 are stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MentionHistogram {
    platform: Option<Platform>,
    bins: BTreeMap<u64, u64>,
    total_papers: u64,
}

impl MentionHistogram {
    /// Builds a histogram from (k, N(k)) pairs. Zero counts are skipped and
    /// repeated levels accumulate.
    pub fn from_bins(
        platform: Option<Platform>,
        bins: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self> {
        let mut hist = MentionHistogram {
            platform,
            ..Default::default()
        };
        for (k, n) in bins {
            if k == 0 {
                return Err(Error::ParameterDomain(
                    "histogram levels must be k >= 1".into(),
                ));
            }
            if n > 0 {
                *hist.bins.entry(k).or_default() += n;
                hist.total_papers += n;
            }
        }
        Ok(hist)
    }

    /// Counts raw mention values; zeros are excluded.
    pub fn from_values(platform: Option<Platform>, values: impl IntoIterator<Item = u64>) -> Self {
        let mut hist = MentionHistogram {
            platform,
            ..Default::default()
        };
        for v in values.into_iter().filter(|&v| v > 0) {
            *hist.bins.entry(v).or_default() += 1;
            hist.total_papers += 1;
        }
        hist
    }

    pub fn platform(&self) -> Option<Platform> {
        self.platform
    }

    pub fn total_papers(&self) -> u64 {
        self.total_papers
    }

    /// Number of distinct mention levels.
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn get(&self, k: u64) -> u64 {
        self.bins.get(&k).copied().unwrap_or(0)
    }

    pub fn max_k(&self) -> Option<u64> {
        self.bins.keys().next_back().copied()
    }

    /// Bins in ascending k.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (u64, u64)> + '_ {
        self.bins.iter().map(|(&k, &n)| (k, n))
    }

    /// Keeps only bins with k <= `k_max`.
    pub fn keep_up_to(&self, k_max: u64) -> MentionHistogram {
        let bins: BTreeMap<u64, u64> = self.bins.range(..=k_max).map(|(&k, &n)| (k, n)).collect();
        let total_papers = bins.values().sum();
        MentionHistogram {
            platform: self.platform,
            bins,
            total_papers,
        }
    }

    /// Multiplies every N(k) by `factor`.
    pub fn scaled(&self, factor: u64) -> MentionHistogram {
        MentionHistogram::from_bins(self.platform, self.iter().map(|(k, n)| (k, n * factor)))
            .expect("levels already validated")
    }

    /// Multiset expansion: each k repeated N(k) times, ascending.
    pub fn expand(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.total_papers as usize);
        for (k, n) in self.iter() {
            out.extend(std::iter::repeat_n(k, n as usize));
        }
        out
    }

    /// Two-column `k,count` text, ascending k.
    pub fn to_export(&self) -> String {
        let mut out = String::from("k,count\n");
        for (k, n) in self.iter() {
            out.push_str(&format!("{k},{n}\n"));
        }
        out
    }

    pub fn parse_export(text: &str, platform: Option<Platform>) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == "k,count" => {}
            Some(h) => return Err(Error::Parse(format!("unexpected histogram header '{h}'"))),
            None => return Ok(MentionHistogram::from_values(platform, [])),
        }
        let mut bins = Vec::new();
        for line in lines {
            let (k, n) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("bad histogram row '{line}'")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad histogram row '{line}'")))
            };
            bins.push((parse(k)?, parse(n)?));
        }
        MentionHistogram::from_bins(platform, bins)
    }
}

/// N(k) over the records' counts on `platform`; zero-mention papers are left out.
pub fn build_histogram(records: &[MentionRecord], platform: Platform) -> MentionHistogram {
    MentionHistogram::from_values(Some(platform), records.iter().map(|r| r.count(platform)))
}
