//! Plain-text file formats.
//!
//! All numbers are written with Rust's shortest round-trip `f64` formatting,
//! so parsing an emitted file reproduces the in-memory values bit for bit.
//! Lines starting with `#` are comments or headers and are skipped by the
//! CSV readers except where a header carries metadata.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;

use risradar_core::{Grid, RisConfig};

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|e| anyhow!("bad number {s:?}: {e}"))
}

/// `key=value` pairs from a `# k=v k=v` header line.
fn parse_header(line: &str) -> Result<BTreeMap<String, String>> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| anyhow!("missing header line"))?;
    body.split_whitespace()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| anyhow!("bad header field {kv:?}"))?;
            Ok((k.to_owned(), v.to_owned()))
        })
        .collect()
}

fn header_field<T: std::str::FromStr>(h: &BTreeMap<String, String>, key: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = h.get(key).ok_or_else(|| anyhow!("header lacks {key}"))?;
    raw.parse()
        .map_err(|e| anyhow!("header field {key}={raw}: {e}"))
}

fn push_pairs(out: &mut String, values: impl Iterator<Item = Complex64>) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(',');
        }
        first = false;
        let _ = write!(out, "{},{}", v.re, v.im);
    }
    out.push('\n');
}

fn parse_pairs(line: &str, expected: usize) -> Result<Vec<Complex64>> {
    let nums: Vec<f64> = line.split(',').map(parse_f64).collect::<Result<_>>()?;
    if nums.len() != 2 * expected {
        bail!("expected {} numbers, found {}", 2 * expected, nums.len());
    }
    Ok(nums
        .chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect())
}

/// A stored configuration with the metadata needed to decide whether it can be reused.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub config: RisConfig,
    pub theta_t: f64,
    pub seed: u64,
}

/// One line per element; each line holds `re,im` for every time slot.
pub fn format_config(file: &ConfigFile) -> String {
    let c = &file.config;
    let mut out = format!(
        "# L={} slots={} theta_t={} seed={}\n",
        c.num_elements(),
        c.num_slots(),
        file.theta_t,
        file.seed
    );
    for l in 0..c.num_elements() {
        push_pairs(&mut out, (0..c.num_slots()).map(|m| c.column(m)[l]));
    }
    out
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let mut lines = text.lines();
    let header = parse_header(lines.next().unwrap_or_default())?;
    let elements: usize = header_field(&header, "L")?;
    let slots: usize = header_field(&header, "slots")?;
    let rows: Vec<Vec<Complex64>> = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| parse_pairs(l, slots))
        .collect::<Result<_>>()?;
    if rows.len() != elements {
        bail!(
            "header says {elements} elements, found {} lines",
            rows.len()
        );
    }
    let mut coefficients = Vec::with_capacity(elements * slots);
    for m in 0..slots {
        coefficients.extend(rows.iter().map(|r| r[m]));
    }
    Ok(ConfigFile {
        config: RisConfig::new(elements, slots, coefficients)?,
        theta_t: header_field(&header, "theta_t")?,
        seed: header_field(&header, "seed")?,
    })
}

pub fn write_config(path: &Path, file: &ConfigFile) -> Result<()> {
    write_file(path, &format_config(file))
}

pub fn read_config(path: &Path) -> Result<ConfigFile> {
    parse_config(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Dimension header, then one `re,im,...` line per row.
pub fn format_matrix(grid: &Grid) -> String {
    let mut out = format!("# rows={} cols={}\n", grid.rows(), grid.cols());
    for r in 0..grid.rows() {
        push_pairs(&mut out, (0..grid.cols()).map(|c| grid.get(r, c)));
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<Grid> {
    let mut lines = text.lines();
    let header = parse_header(lines.next().unwrap_or_default())?;
    let rows: usize = header_field(&header, "rows")?;
    let cols: usize = header_field(&header, "cols")?;
    let mut data = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for line in lines.filter(|l| !l.trim().is_empty()) {
        data.extend(parse_pairs(line, cols)?);
        seen += 1;
    }
    if seen != rows {
        bail!("header says {rows} rows, found {seen}");
    }
    Ok(Grid::from_vec(rows, cols, data)?)
}

/// Plain CSV: optional `#` comment lines, a header row, then numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            comments: Vec::new(),
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn comment(mut self, text: impl Into<String>) -> Self {
        self.comments.push(text.into());
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn format(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let comments = text
            .lines()
            .filter_map(|l| l.strip_prefix("# ").or_else(|| l.strip_prefix('#')))
            .map(str::to_owned)
            .collect();
        let mut lines = data_lines(text);
        let columns: Vec<String> = lines
            .next()
            .ok_or_else(|| anyhow!("missing header row"))?
            .split(',')
            .map(|s| s.trim().to_owned())
            .collect();
        let rows = lines
            .map(|l| {
                let row: Vec<f64> = l.split(',').map(parse_f64).collect::<Result<_>>()?;
                if row.len() != columns.len() {
                    bail!("row has {} cells, header has {}", row.len(), columns.len());
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            comments,
            columns,
            rows,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, &self.format())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
    }
}

/// `angle_deg,power_db` pattern table.
pub fn pattern_table(angles_rad: &[f64], power_db: &[f64]) -> Table {
    let mut t = Table::new(&["angle_deg", "power_db"]);
    for (a, p) in angles_rad.iter().zip(power_db) {
        t.push(vec![a.to_degrees(), *p]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip_multi_slot() {
        let coeffs: Vec<Complex64> = (0..6)
            .map(|i| Complex64::new(1.0 / (i as f64 + 3.0), -(i as f64).sqrt()))
            .collect();
        let file = ConfigFile {
            config: RisConfig::new(3, 2, coeffs).unwrap(),
            theta_t: 2.0 * std::f64::consts::PI / 5.0,
            seed: 99,
        };
        let text = format_config(&file);
        assert!(text.starts_with("# L=3 slots=2 theta_t=1.2566370614359172 seed=99\n"));
        assert_eq!(parse_config(&text).unwrap(), file);
    }

    #[test]
    fn config_rejects_truncated_body() {
        let text = "# L=3 slots=1 theta_t=1 seed=0\n1,0\n0,1\n";
        assert!(parse_config(text).is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let g = Grid::from_fn(3, 4, |r, c| Complex64::new(r as f64 * 0.1, c as f64 / 7.0));
        assert_eq!(parse_matrix(&format_matrix(&g)).unwrap(), g);
    }

    #[test]
    fn table_round_trip_with_comments() {
        let mut t = Table::new(&["a", "b"]).comment("threshold -30 dB");
        t.push(vec![0.1 + 0.2, -300.0]);
        t.push(vec![f64::MIN_POSITIVE, 1e300]);
        let text = t.format();
        assert!(text.starts_with("# threshold -30 dB\na,b\n"));
        assert_eq!(Table::parse(&text).unwrap(), t);
    }
}
