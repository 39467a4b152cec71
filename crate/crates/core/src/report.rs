//! Sampling ranges, verification records and report serialization.
//!
//! CSV columns are exactly `claim_id,x,lhs_mid,lhs_rad,rhs_mid,rhs_rad,margin,status`.
//! Numbers are rendered in scientific notation with 20 significant digits,
//! rounded to nearest (radii are rounded up), e.g. `3.0000000000000000000e2`.

use std::io::{Read, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::float::Round;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::ball::{render_float, render_rational, BallReal, Status};
use crate::context::{Comparison, Context, Engine};
use crate::error::{Error, Result};
use crate::rational::{self, int, parse_rational, ExactRational};

pub const CSV_HEADER: [&str; 8] = [
    "claim_id", "x", "lhs_mid", "lhs_rad", "rhs_mid", "rhs_rad", "margin", "status",
];

/// Largest number of points an all-integers range may expand to.
pub const MAX_INTEGER_POINTS: u64 = 20_000_000;

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_MAX_DENOMINATOR: u64 = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleMode {
    AllIntegers,
    Geometric {
        count: u64,
    },
    RandomRational {
        count: u64,
        max_denominator: u64,
        seed: u64,
    },
    /// All integers up to `integer_cap`, a geometric grid over the whole
    /// range, and seeded random rationals.
    Standard {
        integer_cap: u64,
        geometric_count: u64,
        random_count: u64,
        max_denominator: u64,
        seed: u64,
    },
}

impl SampleMode {
    pub fn name(&self) -> &'static str {
        match self {
            SampleMode::AllIntegers => "all-integers",
            SampleMode::Geometric { .. } => "geometric",
            SampleMode::RandomRational { .. } => "random-rational",
            SampleMode::Standard { .. } => "standard",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeSpec {
    pub x_min: ExactRational,
    pub x_max: ExactRational,
    pub mode: SampleMode,
}

impl RangeSpec {
    pub fn new(x_min: ExactRational, x_max: ExactRational, mode: SampleMode) -> Result<Self> {
        let r = Self { x_min, x_max, mode };
        r.validate()?;
        Ok(r)
    }

    pub fn integers(lo: i64, hi: i64) -> Result<Self> {
        Self::new(int(lo), int(hi), SampleMode::AllIntegers)
    }

    pub fn point(x: ExactRational) -> Result<Self> {
        Self::new(x.clone(), x, SampleMode::AllIntegers)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_min < int(1) {
            return Err(Error::InvalidRange("x_min must be at least 1".into()));
        }
        if self.x_min > self.x_max {
            return Err(Error::InvalidRange("x_min exceeds x_max".into()));
        }
        let counts = match &self.mode {
            SampleMode::AllIntegers => vec![1],
            SampleMode::Geometric { count } => vec![*count],
            SampleMode::RandomRational {
                count, max_denominator, ..
            } => vec![*count, *max_denominator],
            SampleMode::Standard {
                geometric_count,
                max_denominator,
                ..
            } => vec![*geometric_count, *max_denominator],
        };
        if counts.contains(&0) {
            return Err(Error::InvalidRange("counts must be at least 1".into()));
        }
        Ok(())
    }

    /// Sample points, sorted and without duplicates. A degenerate range
    /// (`x_min = x_max`) yields that single point in every mode.
    pub fn points(&self) -> Result<Vec<ExactRational>> {
        self.validate()?;
        if self.x_min == self.x_max {
            return Ok(vec![self.x_min.clone()]);
        }
        let mut pts = match &self.mode {
            SampleMode::AllIntegers => integer_points(&self.x_min, &self.x_max)?,
            SampleMode::Geometric { count } => geometric_points(&self.x_min, &self.x_max, *count),
            SampleMode::RandomRational {
                count,
                max_denominator,
                seed,
            } => random_points(&self.x_min, &self.x_max, *count, *max_denominator, *seed)?,
            SampleMode::Standard {
                integer_cap,
                geometric_count,
                random_count,
                max_denominator,
                seed,
            } => {
                let cap = int(*integer_cap as i64);
                let mut v = Vec::new();
                if self.x_min <= cap {
                    let hi = if self.x_max < cap { self.x_max.clone() } else { cap };
                    v.extend(integer_points(&self.x_min, &hi)?);
                }
                v.extend(geometric_points(&self.x_min, &self.x_max, *geometric_count));
                if *random_count > 0 {
                    v.extend(random_points(
                        &self.x_min,
                        &self.x_max,
                        *random_count,
                        *max_denominator,
                        *seed,
                    )?);
                }
                v
            }
        };
        pts.sort();
        pts.dedup();
        Ok(pts)
    }
}

fn ceil(x: &ExactRational) -> BigInt {
    -rational::floor(&-x)
}

fn integer_points(lo: &ExactRational, hi: &ExactRational) -> Result<Vec<ExactRational>> {
    let a = ceil(lo);
    let b = rational::floor(hi);
    if a > b {
        return Ok(Vec::new());
    }
    let n = (&b - &a + BigInt::from(1)).to_u64().unwrap_or(u64::MAX);
    if n > MAX_INTEGER_POINTS {
        return Err(Error::InvalidRange(format!(
            "all-integers range has {n} points; the limit is {MAX_INTEGER_POINTS}"
        )));
    }
    let mut v = Vec::with_capacity(n as usize);
    let mut k = a;
    while k <= b {
        v.push(ExactRational::from_integer(k.clone()));
        k += 1;
    }
    Ok(v)
}

/// `x_min·(x_max/x_min)^{i/(count−1)}`, rounded to a multiple of 1/1000 and
/// clamped to the range. Evaluated with correctly rounded MPFR arithmetic so
/// the grid is reproducible across platforms.
fn geometric_points(lo: &ExactRational, hi: &ExactRational, count: u64) -> Vec<ExactRational> {
    if count == 1 {
        return vec![lo.clone()];
    }
    let prec = 160;
    let l = BallReal::from_rational(lo, prec);
    let ratio = (&BallReal::from_rational(hi, prec) / &l).ln();
    let mut out = Vec::with_capacity(count as usize);
    for i in 0..count {
        let x = if i == 0 {
            lo.clone()
        } else if i == count - 1 {
            hi.clone()
        } else {
            let t = BallReal::ratio(i as i64, count as i64 - 1, prec);
            let v = &l * &(&ratio * &t).exp();
            let scaled = Float::with_val(prec, v.mid() * 1000u32);
            let (k, _) = scaled.to_integer_round(Round::Nearest).unwrap();
            let q = ExactRational::new(crate::ball::integer_to_bigint(&k), BigInt::from(1000));
            q.clamp(lo.clone(), hi.clone())
        };
        out.push(x);
    }
    out
}

fn random_points(
    lo: &ExactRational,
    hi: &ExactRational,
    count: u64,
    max_denominator: u64,
    seed: u64,
) -> Result<Vec<ExactRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let d = rng.gen_range(1..=max_denominator);
        let db = BigInt::from(d);
        let a = ceil(&(lo * ExactRational::from_integer(db.clone())));
        let b = rational::floor(&(hi * ExactRational::from_integer(db.clone())));
        let (a, b) = match (a.to_i128(), b.to_i128()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidRange("random-rational range too large".into())),
        };
        if a > b {
            continue;
        }
        let n = rng.gen_range(a..=b);
        out.push(ExactRational::new(BigInt::from(n), db));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub claim_id: String,
    pub x: String,
    pub lhs_mid: String,
    pub lhs_rad: String,
    pub rhs_mid: String,
    pub rhs_rad: String,
    pub margin: String,
    pub status: Status,
}

fn zero_rendered() -> String {
    render_rational(&ExactRational::zero())
}

impl VerificationRecord {
    /// Record for a certified comparison; the margin is `rhs − lhs`.
    pub fn from_comparison(claim_id: &str, x: &ExactRational, c: &Comparison, status: Status) -> Self {
        Self {
            claim_id: claim_id.to_string(),
            x: render_rational(x),
            lhs_mid: c.lhs.render_mid(),
            lhs_rad: c.lhs.render_rad(),
            rhs_mid: c.rhs.render_mid(),
            rhs_rad: c.rhs.render_rad(),
            margin: c.margin().render_mid(),
            status,
        }
    }

    /// Record for an exact equality between two rationals.
    pub fn exact_equality(claim_id: &str, x: &ExactRational, lhs: &ExactRational, rhs: &ExactRational) -> Self {
        Self {
            claim_id: claim_id.to_string(),
            x: render_rational(x),
            lhs_mid: render_rational(lhs),
            lhs_rad: zero_rendered(),
            rhs_mid: render_rational(rhs),
            rhs_rad: zero_rendered(),
            margin: render_rational(&(rhs - lhs)),
            status: if lhs == rhs { Status::Pass } else { Status::Fail },
        }
    }

    /// Record for an exact inequality `lhs ≤ rhs` (or `<`).
    pub fn exact_inequality(
        claim_id: &str,
        x: &ExactRational,
        lhs: &ExactRational,
        rhs: &ExactRational,
        strict: bool,
    ) -> Self {
        let holds = if strict { lhs < rhs } else { lhs <= rhs };
        Self {
            status: if holds { Status::Pass } else { Status::Fail },
            ..Self::exact_equality(claim_id, x, lhs, rhs)
        }
    }

    /// Record whose lhs is exact and rhs a ball.
    pub fn mixed(claim_id: &str, x: &ExactRational, c: &Comparison, status: Status, lhs: &ExactRational) -> Self {
        Self {
            lhs_mid: render_rational(lhs),
            lhs_rad: zero_rendered(),
            ..Self::from_comparison(claim_id, x, c, status)
        }
    }

    fn fields(&self) -> [&str; 8] {
        [
            &self.claim_id,
            &self.x,
            &self.lhs_mid,
            &self.lhs_rad,
            &self.rhs_mid,
            &self.rhs_rad,
            &self.margin,
            self.status.as_str(),
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub claim_id: String,
    pub records: Vec<VerificationRecord>,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(skip)]
    keys: Vec<ExactRational>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

impl Summary {
    /// 0 if everything passed, 1 on any failure, 2 if only inconclusive.
    pub fn exit_code(&self) -> i32 {
        if self.fail > 0 {
            1
        } else if self.inconclusive > 0 {
            2
        } else {
            0
        }
    }
}

impl Report {
    pub fn new(claim_id: impl Into<String>) -> Self {
        Self {
            claim_id: claim_id.into(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, x: &ExactRational, record: VerificationRecord) {
        self.keys.push(x.clone());
        self.records.push(record);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn extend(&mut self, other: Report) {
        let n = other.records.len();
        let keys = if other.keys.len() == n {
            other.keys
        } else {
            vec![ExactRational::zero(); n]
        };
        self.keys.extend(keys);
        self.records.extend(other.records);
        self.notes.extend(other.notes);
    }

    /// Stable sort of the records by `x`.
    pub fn sort(&mut self) {
        if self.keys.len() != self.records.len() {
            return;
        }
        let mut idx: Vec<usize> = (0..self.records.len()).collect();
        idx.sort_by(|&a, &b| self.keys[a].cmp(&self.keys[b]));
        self.records = idx.iter().map(|&i| self.records[i].clone()).collect();
        self.keys = idx.iter().map(|&i| self.keys[i].clone()).collect();
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for r in &self.records {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Inconclusive => s.inconclusive += 1,
            }
        }
        s
    }

    pub fn exit_code(&self) -> i32 {
        self.summary().exit_code()
    }

    pub fn all_pass(&self) -> bool {
        self.summary().exit_code() == 0
    }

    pub fn records_for<'a>(&'a self, claim_id: &'a str) -> impl Iterator<Item = &'a VerificationRecord> + 'a {
        self.records.iter().filter(move |r| r.claim_id == claim_id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidRange(format!("unknown format {s:?}"))),
        }
    }
}

pub fn write_csv<W: Write>(records: &[VerificationRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(report: &Report, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn emit<W: Write>(report: &Report, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(&report.records, out),
        Format::Json => write_json(report, out),
    }
}

pub fn emit_to_path(report: &Report, format: Format, path: &std::path::Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    emit(report, format, &mut w)?;
    w.flush()?;
    Ok(())
}

fn check_number(field: &str, value: &str) -> Result<()> {
    parse_rational(value)
        .map(|_| ())
        .map_err(|_| Error::MalformedReport(format!("{field} is not a decimal number: {value:?}")))
}

fn validate_record(r: &VerificationRecord) -> Result<()> {
    if r.claim_id.is_empty() {
        return Err(Error::MalformedReport("empty claim_id".into()));
    }
    check_number("x", &r.x)?;
    check_number("lhs_mid", &r.lhs_mid)?;
    check_number("lhs_rad", &r.lhs_rad)?;
    check_number("rhs_mid", &r.rhs_mid)?;
    check_number("rhs_rad", &r.rhs_rad)?;
    check_number("margin", &r.margin)?;
    for (name, v) in [("lhs_rad", &r.lhs_rad), ("rhs_rad", &r.rhs_rad)] {
        if v.starts_with('-') {
            return Err(Error::MalformedReport(format!("{name} is negative")));
        }
    }
    Ok(())
}

/// Parses a CSV report, requiring the exact header and well-formed fields.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<VerificationRecord>> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut rows = rd.records();
    let header = rows
        .next()
        .ok_or_else(|| Error::MalformedReport("missing header".into()))??;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::MalformedReport("unexpected header".into()));
    }
    let mut out = Vec::new();
    for row in rows {
        let row = row?;
        if row.len() != CSV_HEADER.len() {
            return Err(Error::MalformedReport(format!(
                "expected {} fields, found {}",
                CSV_HEADER.len(),
                row.len()
            )));
        }
        let rec = VerificationRecord {
            claim_id: row[0].to_string(),
            x: row[1].to_string(),
            lhs_mid: row[2].to_string(),
            lhs_rad: row[3].to_string(),
            rhs_mid: row[4].to_string(),
            rhs_rad: row[5].to_string(),
            margin: row[6].to_string(),
            status: row[7].parse()?,
        };
        validate_record(&rec)?;
        out.push(rec);
    }
    Ok(out)
}

/// Parses a JSON report and validates every record.
pub fn read_json<R: Read>(input: R) -> Result<Report> {
    let report: Report = serde_json::from_reader(input)?;
    for r in &report.records {
        validate_record(r)?;
    }
    Ok(report)
}

/// Evaluates `f` at every sample point of `range`, escalating precision per
/// point, and collects one record per point sorted by `x`.
pub fn scan<F>(engine: &Engine, claim_id: &str, range: &RangeSpec, f: F) -> Result<Report>
where
    F: Fn(&Context, &ExactRational) -> Result<Comparison>,
{
    let mut report = Report::new(claim_id);
    for x in range.points()? {
        let (c, st) = engine.decide(|ctx| f(ctx, &x))?;
        report.push(&x, VerificationRecord::from_comparison(claim_id, &x, &c, st));
    }
    report.sort();
    Ok(report)
}

/// Renders a ball's lower endpoint; used in notes.
pub fn render_lower(b: &BallReal) -> String {
    render_float(b.lower(), Round::Down)
}

pub fn render_upper(b: &BallReal) -> String {
    render_float(b.upper(), Round::Up)
}
