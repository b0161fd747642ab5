//! Analysis reports.
//!
//! The serialized form is line-oriented: a version header, then one
//! `record=<kind>; key=value; ...` line per result in a fixed order, then an
//! optional aligned-table view whose lines start with `#`. Only the records
//! are parsed back; every float in them is written with [`format::exact`],
//! so a report survives a parse/serialize cycle byte for byte. The table
//! view is rendered from the same in-memory values through the shared
//! formatters.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fitting::{
    exponent_interpretation, ExponentInterpretation, LsqFitResult, MleFitResult, TruncationPolicy,
};
use crate::format::{exact, fixed, sig4};
use crate::gof::GofResult;
use crate::histogram::{IngestSummary, Platform};
use crate::models::{DistributionModel, Family, PowerLawModel};

pub const HEADER: &str = "mentionfit-report 1";
pub const DEFAULT_SAMPLE_NAME: &str = "main";

/// Flags a run was made with.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub truncation: Option<TruncationPolicy>,
    pub rounds: usize,
    pub significance: f64,
    pub sample_size: usize,
    pub log_bins_per_decade: Option<u32>,
    pub with_replacement: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            truncation: None,
            rounds: crate::gof::DEFAULT_ROUNDS,
            significance: crate::gof::DEFAULT_SIGNIFICANCE,
            sample_size: crate::gof::DEFAULT_SAMPLE_SIZE,
            log_bins_per_decade: None,
            with_replacement: false,
        }
    }
}

/// Log-log fits for one platform.
#[derive(Debug, Clone, PartialEq)]
pub struct LsqEntry {
    pub platform: Platform,
    pub full: LsqFitResult,
    pub truncated: Option<LsqFitResult>,
}

impl LsqEntry {
    /// The fit whose exponent is interpreted: truncated when present.
    pub fn preferred(&self) -> &LsqFitResult {
        self.truncated.as_ref().unwrap_or(&self.full)
    }

    pub fn interpretation(&self) -> ExponentInterpretation {
        exponent_interpretation(self.preferred().model.alpha)
    }
}

/// A maximum-likelihood fit of one family to one named sample, with its
/// bootstrap score when one was run.
#[derive(Debug, Clone, PartialEq)]
pub struct MleEntry {
    pub platform: Platform,
    pub sample: String,
    pub sample_size: usize,
    pub fit: MleFitResult,
    pub gof: Option<GofResult>,
}

impl MleEntry {
    pub fn family(&self) -> Family {
        self.fit.model.family()
    }

    fn key(&self) -> (Platform, String, Family) {
        (self.platform, self.sample.clone(), self.family())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    /// Hex SHA-256 of the input file.
    pub digest: String,
    pub config: RunConfig,
    pub ingest: Option<IngestSummary>,
    /// Sorted by platform.
    pub lsq: Vec<LsqEntry>,
    /// Sorted by (platform, sample, family).
    pub mle: Vec<MleEntry>,
}

impl AnalysisReport {
    pub fn new(digest: impl Into<String>, config: RunConfig) -> Self {
        AnalysisReport {
            digest: digest.into(),
            config,
            ingest: None,
            lsq: Vec::new(),
            mle: Vec::new(),
        }
    }

    pub fn add_lsq(&mut self, entry: LsqEntry) {
        self.lsq.retain(|e| e.platform != entry.platform);
        self.lsq.push(entry);
        self.lsq.sort_by_key(|e| e.platform);
    }

    pub fn add_mle(&mut self, entry: MleEntry) {
        let key = entry.key();
        self.mle.retain(|e| e.key() != key);
        self.mle.push(entry);
        self.mle.sort_by_key(|e| e.key());
    }

    /// Combines fragments of one input. The first fragment's config and
    /// ingest summary win; later entries replace earlier ones with the same
    /// key.
    pub fn merge(fragments: impl IntoIterator<Item = AnalysisReport>) -> Result<AnalysisReport> {
        let mut it = fragments.into_iter();
        let mut out = it
            .next()
            .ok_or_else(|| Error::Usage("no report fragments to merge".into()))?;
        for frag in it {
            if frag.digest != out.digest {
                return Err(Error::FragmentMismatch {
                    expected: out.digest.clone(),
                    found: frag.digest,
                });
            }
            if out.ingest.is_none() {
                out.ingest = frag.ingest;
            }
            for e in frag.lsq {
                out.add_lsq(e);
            }
            for e in frag.mle {
                out.add_mle(e);
            }
        }
        Ok(out)
    }

    /// Records only.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        out.push_str(HEADER);
        out.push('\n');
        let c = &self.config;
        line(
            &mut out,
            "run",
            &[
                ("digest", self.digest.clone()),
                ("seed", c.seed.to_string()),
                ("truncate", opt(c.truncation.map(|p| p.to_string()))),
                ("rounds", c.rounds.to_string()),
                ("significance", exact(c.significance)),
                ("sample_size", c.sample_size.to_string()),
                (
                    "log_bins",
                    opt(c.log_bins_per_decade.map(|b| b.to_string())),
                ),
                ("replacement", c.with_replacement.to_string()),
            ],
        );
        if let Some(s) = &self.ingest {
            let mut fields = vec![
                ("total_records", s.total_records.to_string()),
                ("records_with_doi", s.records_with_doi.to_string()),
                (
                    "records_with_any_mention",
                    s.records_with_any_mention.to_string(),
                ),
                ("malformed_rows", s.malformed_rows.to_string()),
            ];
            let nonzero: Vec<(String, String)> = Platform::ALL
                .iter()
                .map(|p| (format!("nonzero_{p}"), s.nonzero(*p).to_string()))
                .collect();
            fields.extend(nonzero.iter().map(|(k, v)| (k.as_str(), v.clone())));
            line(&mut out, "ingest", &fields);
        }
        for e in &self.lsq {
            lsq_line(&mut out, e.platform, "full", &e.full);
            if let Some(t) = &e.truncated {
                lsq_line(&mut out, e.platform, "truncated", t);
            }
            let i = e.interpretation();
            line(
                &mut out,
                "interpretation",
                &[
                    ("platform", e.platform.to_string()),
                    ("alpha", exact(e.preferred().model.alpha)),
                    ("median_exists", i.median_exists.to_string()),
                    ("mean_finite", i.mean_finite.to_string()),
                    ("variance_finite", i.variance_finite.to_string()),
                ],
            );
        }
        for e in &self.mle {
            let mut fields = vec![
                ("platform", e.platform.to_string()),
                ("sample", e.sample.clone()),
                ("sample_size", e.sample_size.to_string()),
                ("family", e.family().to_string()),
            ];
            let params = e.fit.model.params();
            fields.extend(params.iter().map(|(k, v)| (*k, exact(*v))));
            fields.extend([
                ("log_likelihood", exact(e.fit.log_likelihood)),
                ("converged", e.fit.converged.to_string()),
                ("at_boundary", e.fit.at_boundary.to_string()),
                ("verified", e.fit.verified.to_string()),
                ("iterations", e.fit.iterations.to_string()),
            ]);
            line(&mut out, "mle", &fields);
            if let Some(g) = &e.gof {
                line(
                    &mut out,
                    "gof",
                    &[
                        ("platform", e.platform.to_string()),
                        ("sample", e.sample.clone()),
                        ("family", e.family().to_string()),
                        ("ks", exact(g.ks)),
                        ("p_value", exact(g.p_value)),
                        ("n_bootstrap", g.n_bootstrap.to_string()),
                        ("discarded", g.discarded.to_string()),
                        ("significance", exact(g.significance)),
                        ("plausible", g.plausible.to_string()),
                        ("seed", g.seed.to_string()),
                    ],
                );
            }
        }
        out
    }

    /// Records followed by the table view.
    pub fn render(&self) -> String {
        let mut out = self.to_records();
        out.push_str(&self.tables());
        out
    }

    /// Aligned tables, every line prefixed with `#`.
    pub fn tables(&self) -> String {
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut out = String::new();
        if let Some(s) = &self.ingest {
            out.push_str("#\n# Records\n");
            rows.push(vec!["rows read".into(), s.total_records.to_string()]);
            rows.push(vec!["with DOI".into(), s.records_with_doi.to_string()]);
            rows.push(vec![
                "with any mention".into(),
                s.records_with_any_mention.to_string(),
            ]);
            rows.push(vec!["malformed rows".into(), s.malformed_rows.to_string()]);
            for p in Platform::ALL {
                rows.push(vec![format!("nonzero {p}"), s.nonzero(p).to_string()]);
            }
            table(&mut out, &mut rows);
        }
        if !self.lsq.is_empty() {
            out.push_str("#\n# Log-log least squares (1 = full, 2 = truncated)\n");
            rows.push(
                ["source", "data points", "A", "B (slope)", "R^2", "% change"]
                    .map(String::from)
                    .to_vec(),
            );
            for e in &self.lsq {
                rows.push(lsq_row(e.platform, 1, &e.full));
                if let Some(t) = &e.truncated {
                    rows.push(lsq_row(e.platform, 2, t));
                }
            }
            table(&mut out, &mut rows);
        }
        if !self.mle.is_empty() {
            out.push_str("#\n# Maximum likelihood with bootstrap KS\n");
            rows.push(
                [
                    "source", "sample", "alpha", "B", "ks", "p", "|", "mu", "sigma", "ks", "p",
                ]
                .map(String::from)
                .to_vec(),
            );
            let mut groups: BTreeMap<(Platform, &str), [Option<&MleEntry>; 2]> = BTreeMap::new();
            for e in &self.mle {
                let slot = match e.family() {
                    Family::Hooked => 0,
                    Family::DLognormal => 1,
                    _ => continue,
                };
                groups.entry((e.platform, e.sample.as_str())).or_default()[slot] = Some(e);
            }
            for ((platform, sample), [hooked, lognormal]) in groups {
                let mut row = vec![platform.to_string(), sample.to_string()];
                row.extend(mle_cells(hooked));
                row.push("|".into());
                row.extend(mle_cells(lognormal));
                rows.push(row);
            }
            table(&mut out, &mut rows);
            let others: Vec<&MleEntry> = self
                .mle
                .iter()
                .filter(|e| !matches!(e.family(), Family::Hooked | Family::DLognormal))
                .collect();
            if !others.is_empty() {
                out.push_str("#\n# Other families\n");
                rows.push(
                    ["source", "sample", "family", "parameters", "ks", "p"]
                        .map(String::from)
                        .to_vec(),
                );
                for e in others {
                    let params: Vec<String> = e
                        .fit
                        .model
                        .params()
                        .iter()
                        .map(|(k, v)| format!("{k}={}", sig4(*v)))
                        .collect();
                    let (ks, p) = gof_cells(e.gof.as_ref());
                    rows.push(vec![
                        e.platform.to_string(),
                        e.sample.clone(),
                        e.family().to_string(),
                        params.join(" "),
                        ks,
                        p,
                    ]);
                }
                table(&mut out, &mut rows);
            }
        }
        out
    }

    /// Parses the record lines of a rendered report; `#` lines are skipped.
    pub fn parse(text: &str) -> Result<AnalysisReport> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        match lines.next() {
            Some((_, l)) if l.trim() == HEADER => {}
            _ => return Err(Error::Parse(format!("missing '{HEADER}' header"))),
        }
        let mut report: Option<AnalysisReport> = None;
        for (idx, raw) in lines {
            let lineno = idx + 1;
            let rec = Record::parse(raw, lineno)?;
            if rec.kind == "run" {
                if report.is_some() {
                    return Err(Error::Parse(format!("line {lineno}: duplicate run record")));
                }
                report = Some(AnalysisReport::new(rec.str("digest")?, rec.config()?));
                continue;
            }
            let r = report
                .as_mut()
                .ok_or_else(|| Error::Parse(format!("line {lineno}: record before run record")))?;
            match rec.kind.as_str() {
                "ingest" => {
                    let mut s = IngestSummary {
                        total_records: rec.num("total_records")?,
                        records_with_doi: rec.num("records_with_doi")?,
                        records_with_any_mention: rec.num("records_with_any_mention")?,
                        malformed_rows: rec.num("malformed_rows")?,
                        per_platform_nonzero: BTreeMap::new(),
                    };
                    for p in Platform::ALL {
                        let n: u64 = rec.num(&format!("nonzero_{p}"))?;
                        if n > 0 {
                            s.per_platform_nonzero.insert(p, n);
                        }
                    }
                    r.ingest = Some(s);
                }
                "lsq" => {
                    let platform: Platform = rec.str("platform")?.parse()?;
                    let fit = rec.lsq()?;
                    match rec.str("variant")?.as_str() {
                        "full" => r.add_lsq(LsqEntry {
                            platform,
                            full: fit,
                            truncated: None,
                        }),
                        "truncated" => {
                            let entry = r
                                .lsq
                                .iter_mut()
                                .find(|e| e.platform == platform)
                                .ok_or_else(|| {
                                    Error::Parse(format!(
                                        "line {lineno}: truncated fit without full fit"
                                    ))
                                })?;
                            entry.truncated = Some(fit);
                        }
                        v => {
                            return Err(Error::Parse(format!(
                                "line {lineno}: unknown lsq variant '{v}'"
                            )))
                        }
                    }
                }
                // Derived from the lsq records; checked, not stored.
                "interpretation" => {
                    let platform: Platform = rec.str("platform")?.parse()?;
                    let entry = r
                        .lsq
                        .iter()
                        .find(|e| e.platform == platform)
                        .ok_or_else(|| {
                            Error::Parse(format!("line {lineno}: interpretation without fit"))
                        })?;
                    let i = entry.interpretation();
                    if rec.flag("mean_finite")? != i.mean_finite
                        || rec.flag("median_exists")? != i.median_exists
                        || rec.flag("variance_finite")? != i.variance_finite
                    {
                        return Err(Error::Parse(format!(
                            "line {lineno}: interpretation disagrees with fit"
                        )));
                    }
                }
                "mle" => {
                    let family: Family = rec.str("family")?.parse()?;
                    let names: &[&str] = match family {
                        Family::Hooked => &["alpha", "B"],
                        Family::DLognormal => &["mu", "sigma"],
                        Family::PowerLaw => &["alpha"],
                        Family::TruncatedPowerLaw => &["alpha", "k_max"],
                    };
                    let params = names
                        .iter()
                        .map(|n| Ok((*n, rec.float(n)?)))
                        .collect::<Result<Vec<_>>>()?;
                    r.add_mle(MleEntry {
                        platform: rec.str("platform")?.parse()?,
                        sample: rec.str("sample")?,
                        sample_size: rec.num("sample_size")?,
                        fit: MleFitResult {
                            model: DistributionModel::from_params(family, &params)?,
                            log_likelihood: rec.float("log_likelihood")?,
                            converged: rec.flag("converged")?,
                            at_boundary: rec.flag("at_boundary")?,
                            verified: rec.flag("verified")?,
                            iterations: rec.num("iterations")?,
                        },
                        gof: None,
                    });
                }
                "gof" => {
                    let platform: Platform = rec.str("platform")?.parse()?;
                    let sample = rec.str("sample")?;
                    let family: Family = rec.str("family")?.parse()?;
                    let entry = r
                        .mle
                        .iter_mut()
                        .find(|e| e.key() == (platform, sample.clone(), family))
                        .ok_or_else(|| {
                            Error::Parse(format!("line {lineno}: gof record without mle record"))
                        })?;
                    entry.gof = Some(GofResult {
                        ks: rec.float("ks")?,
                        p_value: rec.float("p_value")?,
                        n_bootstrap: rec.num("n_bootstrap")?,
                        discarded: rec.num("discarded")?,
                        significance: rec.float("significance")?,
                        plausible: rec.flag("plausible")?,
                        seed: rec.num("seed")?,
                    });
                }
                k => {
                    return Err(Error::Parse(format!(
                        "line {lineno}: unknown record kind '{k}'"
                    )))
                }
            }
        }
        report.ok_or_else(|| Error::Parse("report has no run record".into()))
    }
}

/// One-line machine-readable error record.
pub fn error_record(err: &Error) -> String {
    let message = err.to_string().replace([';', '\n'], ",");
    format!("record=error; kind={}; message={message}", err.kind())
}

fn opt(v: Option<String>) -> String {
    v.unwrap_or_else(|| "none".into())
}

fn line(out: &mut String, kind: &str, fields: &[(&str, String)]) {
    out.push_str("record=");
    out.push_str(kind);
    for (k, v) in fields {
        let _ = write!(out, "; {k}={v}");
    }
    out.push('\n');
}

fn lsq_line(out: &mut String, platform: Platform, variant: &str, fit: &LsqFitResult) {
    let row = format!("{platform}{}", if variant == "full" { 1 } else { 2 });
    line(
        out,
        "lsq",
        &[
            ("row", row),
            ("platform", platform.to_string()),
            ("variant", variant.to_string()),
            ("n_points", fit.n_points.to_string()),
            ("n_bins", fit.n_bins.to_string()),
            ("amplitude", exact(fit.model.amplitude)),
            ("alpha", exact(fit.model.alpha)),
            ("r_squared", exact(fit.r_squared)),
            ("k_max", opt(fit.k_max.map(|k| k.to_string()))),
            ("pct_r2_change", opt(fit.pct_r2_change.map(exact))),
        ],
    );
}

fn lsq_row(platform: Platform, suffix: u8, fit: &LsqFitResult) -> Vec<String> {
    vec![
        format!("{platform}{suffix}"),
        fit.n_points.to_string(),
        sig4(fit.model.amplitude),
        sig4(fit.slope()),
        sig4(fit.r_squared),
        fit.pct_r2_change
            .map_or_else(|| "-".into(), |p| fixed(p, 1)),
    ]
}

fn gof_cells(gof: Option<&GofResult>) -> (String, String) {
    gof.map_or_else(
        || ("-".into(), "-".into()),
        |g| (fixed(g.ks, 3), fixed(g.p_value, 3)),
    )
}

fn mle_cells(entry: Option<&MleEntry>) -> Vec<String> {
    let Some(e) = entry else {
        return vec!["-".into(); 4];
    };
    let mut cells: Vec<String> = e.fit.model.params().iter().map(|(_, v)| sig4(*v)).collect();
    let (ks, p) = gof_cells(e.gof.as_ref());
    cells.push(ks);
    cells.push(p);
    cells
}

/// Writes `rows` left-aligned with two-space gutters, then clears them.
fn table(out: &mut String, rows: &mut Vec<Vec<String>>) {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    for row in rows.drain(..) {
        let mut l = String::from("#");
        for (c, cell) in row.iter().enumerate() {
            let _ = write!(l, "  {cell:<w$}", w = widths[c]);
        }
        out.push_str(l.trim_end());
        out.push('\n');
    }
}

struct Record {
    kind: String,
    fields: BTreeMap<String, String>,
    line: usize,
}

impl Record {
    fn parse(raw: &str, line: usize) -> Result<Record> {
        let mut fields = BTreeMap::new();
        for part in raw.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {line}: field '{part}' has no '='")))?;
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
        let kind = fields
            .remove("record")
            .ok_or_else(|| Error::Parse(format!("line {line}: missing record kind")))?;
        Ok(Record { kind, fields, line })
    }

    fn str(&self, key: &str) -> Result<String> {
        self.fields.get(key).cloned().ok_or_else(|| {
            Error::Parse(format!(
                "line {}: {} record lacks '{key}'",
                self.line, self.kind
            ))
        })
    }

    fn value<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let s = self.str(key)?;
        s.parse()
            .map_err(|_| Error::Parse(format!("line {}: bad value '{s}' for '{key}'", self.line)))
    }

    fn num<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.value(key)
    }

    fn float(&self, key: &str) -> Result<f64> {
        self.value(key)
    }

    fn flag(&self, key: &str) -> Result<bool> {
        self.value(key)
    }

    fn optional<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        if self.str(key)? == "none" {
            Ok(None)
        } else {
            self.value(key).map(Some)
        }
    }

    fn config(&self) -> Result<RunConfig> {
        let truncation = match self.str("truncate")?.as_str() {
            "none" => None,
            p => Some(p.parse()?),
        };
        Ok(RunConfig {
            seed: self.num("seed")?,
            truncation,
            rounds: self.num("rounds")?,
            significance: self.float("significance")?,
            sample_size: self.num("sample_size")?,
            log_bins_per_decade: self.optional("log_bins")?,
            with_replacement: self.flag("replacement")?,
        })
    }

    fn lsq(&self) -> Result<LsqFitResult> {
        Ok(LsqFitResult {
            model: PowerLawModel {
                amplitude: self.float("amplitude")?,
                alpha: self.float("alpha")?,
            },
            r_squared: self.float("r_squared")?,
            n_points: self.num("n_points")?,
            n_bins: self.num("n_bins")?,
            k_max: self.optional("k_max")?,
            pct_r2_change: self.optional("pct_r2_change")?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{DiscretizedLognormal, HookedPowerLaw};

    fn lsq(alpha: f64, r2: f64, k_max: Option<u64>, pct: Option<f64>) -> LsqFitResult {
        LsqFitResult {
            model: PowerLawModel {
                amplitude: 444464.0,
                alpha,
            },
            r_squared: r2,
            n_points: 700_985,
            n_bins: 412,
            k_max,
            pct_r2_change: pct,
        }
    }

    fn mle(model: DistributionModel) -> MleFitResult {
        MleFitResult {
            model,
            log_likelihood: -1234.5678,
            converged: true,
            at_boundary: false,
            verified: true,
            iterations: 71,
        }
    }

    fn gof(ks: f64, p: f64) -> GofResult {
        GofResult {
            ks,
            p_value: p,
            n_bootstrap: 1000,
            discarded: 0,
            significance: 0.05,
            plausible: p > 0.05,
            seed: 42,
        }
    }

    fn sample_report() -> AnalysisReport {
        let mut r = AnalysisReport::new(
            "ab12",
            RunConfig {
                truncation: Some(TruncationPolicy::default()),
                seed: 42,
                ..RunConfig::default()
            },
        );
        let mut s = IngestSummary {
            total_records: 10,
            records_with_doi: 9,
            records_with_any_mention: 7,
            malformed_rows: 1,
            ..Default::default()
        };
        s.per_platform_nonzero.insert(Platform::Twitter, 6);
        r.ingest = Some(s);
        r.add_lsq(LsqEntry {
            platform: Platform::Twitter,
            full: lsq(1.8, 0.93, None, None),
            truncated: Some(lsq(2.1, 0.961, Some(512), Some(3.3333))),
        });
        r.add_mle(MleEntry {
            platform: Platform::Twitter,
            sample: DEFAULT_SAMPLE_NAME.into(),
            sample_size: 500,
            fit: mle(HookedPowerLaw::new(2.235, 6.709).unwrap().into()),
            gof: Some(gof(0.032, 0.481)),
        });
        r.add_mle(MleEntry {
            platform: Platform::Twitter,
            sample: DEFAULT_SAMPLE_NAME.into(),
            sample_size: 500,
            fit: mle(DiscretizedLognormal::new(0.99, 0.494).unwrap().into()),
            gof: None,
        });
        r
    }

    #[test]
    fn round_trip_is_lossless() {
        let r = sample_report();
        let text = r.render();
        let back = AnalysisReport::parse(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.render(), text);
    }

    #[test]
    fn rows_are_named_by_variant() {
        let text = sample_report().to_records();
        assert!(text.contains("record=lsq; row=twitter1;"));
        assert!(text.contains("record=lsq; row=twitter2;"));
    }

    #[test]
    fn tables_use_shared_formatters() {
        let t = sample_report().tables();
        assert!(t.contains("twitter2"), "{t}");
        assert!(t.contains(&fixed(3.3333, 1)));
        assert!(t.contains("4.445e5"));
        assert!(t.contains("2.235") && t.contains("6.709") && t.contains("0.481"));
        assert!(t.lines().all(|l| l.starts_with('#')));
    }

    #[test]
    fn merge_checks_digest() {
        let a = sample_report();
        let mut b = AnalysisReport::new("ff00", RunConfig::default());
        b.add_lsq(a.lsq[0].clone());
        let err = AnalysisReport::merge([a.clone(), b]).unwrap_err();
        assert_eq!(err.kind(), "fragment_mismatch");
        assert_eq!(AnalysisReport::merge([a.clone()]).unwrap(), a);
    }

    #[test]
    fn merge_combines_and_orders() {
        let full = sample_report();
        let mut a = full.clone();
        a.mle.clear();
        let mut b = AnalysisReport::new(full.digest.clone(), full.config.clone());
        for e in full.mle.iter().rev() {
            b.add_mle(e.clone());
        }
        assert_eq!(
            AnalysisReport::merge([a, b]).unwrap().render(),
            full.render()
        );
    }

    #[test]
    fn parse_errors() {
        assert!(AnalysisReport::parse("").is_err());
        assert!(
            AnalysisReport::parse("mentionfit-report 1\nrecord=lsq; platform=twitter\n").is_err()
        );
        let bad = sample_report()
            .to_records()
            .replace("alpha=2.", "alpha=x2.");
        assert_eq!(AnalysisReport::parse(&bad).unwrap_err().kind(), "parse");
    }

    #[test]
    fn error_records_are_single_line() {
        let e = Error::Parse("a; b\nc".into());
        assert_eq!(
            error_record(&e),
            "record=error; kind=parse; message=parse error: a, b,c"
        );
    }
}
