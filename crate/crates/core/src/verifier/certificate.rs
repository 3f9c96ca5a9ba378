//! Certificates: the sorted leaves of a campaign with a header and a
//! summary, rendered as JSON or CSV.
//!
//! Numbers are written in shortest round-trip form in both renderings, so
//! the same certificate always produces the same bytes. The wall time is
//! only recorded when explicitly attached with
//! [`Certificate::with_seconds`].

use std::fmt::Write as _;
use std::io;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Campaign, Status, VerdictCell, STRATEGY};
use crate::interval::transcendental_slack_ulps;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected json or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub campaign: Campaign,
    pub kernel_slack_ulps: u32,
    pub tool_version: String,
    pub strategy: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub p_lo: f64,
    pub p_hi: f64,
    pub s_lo: f64,
    pub s_hi: f64,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub status: Status,
    pub g_lo: Option<f64>,
    pub g_hi: Option<f64>,
    pub depth: u32,
}

pub const CSV_COLUMNS: &str = "p_lo,p_hi,s_lo,s_hi,sigma_lo,sigma_hi,status,g_lo,g_hi,depth";

impl CellRecord {
    fn from_cell(c: &VerdictCell) -> Self {
        let b = &c.bx;
        CellRecord {
            p_lo: b.p.lo(),
            p_hi: b.p.hi(),
            s_lo: b.s.lo(),
            s_hi: b.s.hi(),
            sigma_lo: b.sigma.lo(),
            sigma_hi: b.sigma.hi(),
            status: c.status,
            g_lo: c.g_enclosure.map(|g| g.lo()),
            g_hi: c.g_enclosure.map(|g| g.hi()),
            depth: c.depth,
        }
    }

    pub fn to_csv_row(&self) -> String {
        let mut b = ryu::Buffer::new();
        let mut out = String::new();
        for x in [self.p_lo, self.p_hi, self.s_lo, self.s_hi, self.sigma_lo, self.sigma_hi] {
            out.push_str(b.format(x));
            out.push(',');
        }
        out.push_str(self.status.as_str());
        for x in [self.g_lo, self.g_hi] {
            out.push(',');
            if let Some(x) = x {
                out.push_str(b.format(x));
            }
        }
        let _ = write!(out, ",{}", self.depth);
        out
    }

    pub fn from_csv_row(row: &str) -> Result<Self, String> {
        let f: Vec<&str> = row.trim_end().split(',').collect();
        if f.len() != 10 {
            return Err(format!("expected 10 fields, got {}", f.len()));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
        let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
        let status = match f[6] {
            "PROVEN_POSITIVE" => Status::ProvenPositive,
            "INDETERMINATE" => Status::Indeterminate,
            "EXCLUDED" => Status::Excluded,
            other => return Err(format!("unknown status {other:?}")),
        };
        Ok(CellRecord {
            p_lo: num(f[0])?,
            p_hi: num(f[1])?,
            s_lo: num(f[2])?,
            s_hi: num(f[3])?,
            sigma_lo: num(f[4])?,
            sigma_hi: num(f[5])?,
            status,
            g_lo: opt(f[7])?,
            g_hi: opt(f[8])?,
            depth: f[9].parse().map_err(|e| format!("depth: {e}"))?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub proven: usize,
    pub indeterminate: usize,
    pub excluded: usize,
    /// Smallest `g` lower bound over proven leaves.
    pub min_g_lo: Option<f64>,
    /// Deepest leaf.
    pub max_depth: u32,
    pub seconds: Option<f64>,
}

/// The serialized form of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub header: Header,
    pub cells: Vec<CellRecord>,
    pub summary: Summary,
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub campaign: Campaign,
    pub kernel_slack_ulps: u32,
    pub cells: Vec<VerdictCell>,
    pub summary: Summary,
}

impl Certificate {
    /// Wraps sorted leaves; the summary is derived from them.
    pub fn new(campaign: Campaign, cells: Vec<VerdictCell>) -> Self {
        let count = |s: Status| cells.iter().filter(|c| c.status == s).count();
        let min_g_lo = cells
            .iter()
            .filter(|c| c.status == Status::ProvenPositive)
            .filter_map(|c| c.g_enclosure.map(|g| g.lo()))
            .reduce(f64::min);
        let summary = Summary {
            proven: count(Status::ProvenPositive),
            indeterminate: count(Status::Indeterminate),
            excluded: count(Status::Excluded),
            min_g_lo,
            max_depth: cells.iter().map(|c| c.depth).max().unwrap_or(0),
            seconds: None,
        };
        Certificate { campaign, kernel_slack_ulps: transcendental_slack_ulps(), cells, summary }
    }

    pub fn with_seconds(mut self, seconds: f64) -> Self {
        self.summary.seconds = Some(seconds);
        self
    }

    pub fn header(&self) -> Header {
        Header {
            campaign: self.campaign.clone(),
            kernel_slack_ulps: self.kernel_slack_ulps,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            strategy: STRATEGY.to_string(),
        }
    }

    pub fn records(&self) -> Vec<CellRecord> {
        self.cells.iter().map(CellRecord::from_cell).collect()
    }

    pub fn to_file(&self) -> CertificateFile {
        CertificateFile { header: self.header(), cells: self.records(), summary: self.summary.clone() }
    }

    /// True when every leaf is proven or excluded.
    pub fn is_complete(&self) -> bool {
        self.summary.indeterminate == 0
    }

    /// JSON with one cell record per line.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{{\"header\":{},", json(&self.header()));
        out.push_str("\"cells\":[");
        for (i, r) in self.records().iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            out.push_str(&json(r));
        }
        out.push_str("\n],\n");
        let _ = writeln!(out, "\"summary\":{}}}", json(&self.summary));
        out
    }

    /// CSV with `#` comment lines for the header and the summary.
    pub fn to_csv(&self) -> String {
        let h = self.header();
        let mut b = ryu::Buffer::new();
        let mut out = String::new();
        let _ = writeln!(out, "# tool_version={}", h.tool_version);
        let _ = writeln!(out, "# kernel_slack_ulps={}", h.kernel_slack_ulps);
        let _ = writeln!(out, "# strategy={}", h.strategy);
        let _ = writeln!(out, "# campaign={}", json(&h.campaign));
        let _ = writeln!(out, "{CSV_COLUMNS}");
        for r in self.records() {
            let _ = writeln!(out, "{}", r.to_csv_row());
        }
        let s = &self.summary;
        let mut opt = |x: Option<f64>| x.map(|x| b.format(x).to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "# summary proven={} indeterminate={} excluded={} min_g_lo={} max_depth={} seconds={}",
            s.proven,
            s.indeterminate,
            s.excluded,
            opt(s.min_g_lo),
            s.max_depth,
            opt(s.seconds)
        );
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn emit(&self, path: &Path, format: Format) -> io::Result<()> {
        std::fs::write(path, self.render(format))
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Parses the data rows of a CSV certificate.
pub fn csv_records(text: &str) -> Result<Vec<CellRecord>, String> {
    text.lines()
        .filter(|l| !l.starts_with('#') && *l != CSV_COLUMNS && !l.is_empty())
        .map(CellRecord::from_csv_row)
        .collect()
}
