//! File formats.
//!
//! | file | format |
//! |------|--------|
//! | ranging samples | CSV `distance_m,rssi_dbm,tx_power_dbm` |
//! | field observations | CSV `tx_id,rx_id,rssi_dbm,snr_db,timestamp,truth_x_m,truth_y_m` |
//! | anchors | CSV `rx_id,x_m,y_m`; row order fixes the lateration reference (last row) |
//! | path-loss model | JSON `{"plo_db", "eta", "d0_m"}` or flat `key = value` lines |
//! | scenario | JSON mirroring [`Scenario`] |
//! | localisation report | CSV `placement_index,actual_x,actual_y,est_x,est_y,er_m` + footer |
//! | comparison | CSV `replication,ger_tri_m,ger_multi_m,multi_wins` + footer |
//! | RSSI curve | CSV `distance_m,rssi_dbm` |
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! write followed by a parse reproduces every value exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::lateration::{AnchorNode, Method};
use crate::metrics::{LocalizationReport, Placement};
use crate::pathloss::{PathLossModel, RangingSample};
use crate::simulator::{ComparisonReport, RssiSample, Scenario};
use crate::{Error, Point2, Result};

pub const RANGING_HEADER: [&str; 3] = ["distance_m", "rssi_dbm", "tx_power_dbm"];
pub const OBSERVATION_HEADER: [&str; 7] = [
    "tx_id",
    "rx_id",
    "rssi_dbm",
    "snr_db",
    "timestamp",
    "truth_x_m",
    "truth_y_m",
];
pub const ANCHOR_HEADER: [&str; 3] = ["rx_id", "x_m", "y_m"];
pub const REPORT_HEADER: [&str; 6] = ["placement_index", "actual_x", "actual_y", "est_x", "est_y", "er_m"];
pub const COMPARISON_HEADER: [&str; 4] = ["replication", "ger_tri_m", "ger_multi_m", "multi_wins"];
pub const CURVE_HEADER: [&str; 2] = ["distance_m", "rssi_dbm"];
/// First field of the footer row in report and comparison CSVs.
pub const SUMMARY_TAG: &str = "summary";

/// One line of a receiver log.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationRecord {
    pub tx_id: String,
    pub rx_id: String,
    pub rssi_dbm: f64,
    pub snr_db: Option<f64>,
    /// ISO-8601, kept verbatim.
    pub timestamp: Option<String>,
    pub truth: Option<Point2>,
    /// 1-based line number in the source file (header is line 1).
    pub line: u64,
}

/// Column lookup over a header row; `mandatory` columns must be present.
struct Columns {
    index: BTreeMap<String, usize>,
}

impl Columns {
    fn new(header: &csv::StringRecord, mandatory: &[&str]) -> Result<Self> {
        let index: BTreeMap<String, usize> = header
            .iter()
            .enumerate()
            .map(|(i, h)| (h.trim().to_string(), i))
            .collect();
        for col in mandatory {
            if !index.contains_key(*col) {
                return Err(Error::Schema(format!("missing mandatory column `{col}`")));
            }
        }
        Ok(Self { index })
    }

    fn get<'r>(&self, rec: &'r csv::StringRecord, col: &str) -> Option<&'r str> {
        self.index
            .get(col)
            .and_then(|&i| rec.get(i))
            .map(str::trim)
            .filter(|s| !s.is_empty())
    }

    fn required<'r>(&self, rec: &'r csv::StringRecord, col: &str, line: u64) -> Result<&'r str> {
        self.get(rec, col).ok_or_else(|| Error::Row {
            line,
            message: format!("`{col}` is empty"),
        })
    }

    fn number(&self, rec: &csv::StringRecord, col: &str, line: u64) -> Result<f64> {
        parse_number(self.required(rec, col, line)?, col, line)
    }

    fn optional_number(&self, rec: &csv::StringRecord, col: &str, line: u64) -> Result<Option<f64>> {
        self.get(rec, col).map(|v| parse_number(v, col, line)).transpose()
    }
}

fn parse_number(raw: &str, col: &str, line: u64) -> Result<f64> {
    match raw.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Row {
            line,
            message: format!("`{col}`: cannot parse `{raw}` as a finite number"),
        }),
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map(|p| p.line()).unwrap_or(0)
}

/// Reads the header and all data records; an empty input is a schema error.
fn records(text: &str, mandatory: &[&str]) -> Result<(Columns, Vec<csv::StringRecord>)> {
    if text.trim().is_empty() {
        return Err(Error::Schema("empty file".into()));
    }
    let mut rdr = reader(text);
    let cols = Columns::new(rdr.headers()?, mandatory)?;
    let rows = rdr.records().collect::<std::result::Result<Vec<_>, _>>()?;
    Ok((cols, rows))
}

/// Parses a receiver log. With `strict`, a file with a header but no data
/// rows is a schema error; otherwise it yields an empty list.
pub fn parse_observations(text: &str, strict: bool) -> Result<Vec<ObservationRecord>> {
    let (cols, rows) = records(text, &OBSERVATION_HEADER[..3])?;
    if rows.is_empty() && strict {
        return Err(Error::Schema("no data rows".into()));
    }
    rows.iter()
        .map(|rec| {
            let line = line_of(rec);
            let truth_x = cols.optional_number(rec, "truth_x_m", line)?;
            let truth_y = cols.optional_number(rec, "truth_y_m", line)?;
            let truth = match (truth_x, truth_y) {
                (Some(x), Some(y)) => Some(Point2::new(x, y)),
                (None, None) => None,
                _ => {
                    return Err(Error::Row {
                        line,
                        message: "truth_x_m and truth_y_m must be given together".into(),
                    })
                }
            };
            Ok(ObservationRecord {
                tx_id: cols.required(rec, "tx_id", line)?.to_string(),
                rx_id: cols.required(rec, "rx_id", line)?.to_string(),
                rssi_dbm: cols.number(rec, "rssi_dbm", line)?,
                snr_db: cols.optional_number(rec, "snr_db", line)?,
                timestamp: cols.get(rec, "timestamp").map(str::to_string),
                truth,
                line,
            })
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_observations(records: &[ObservationRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(OBSERVATION_HEADER)?;
    for r in records {
        w.write_record([
            r.tx_id.clone(),
            r.rx_id.clone(),
            r.rssi_dbm.to_string(),
            opt(r.snr_db),
            r.timestamp.clone().unwrap_or_default(),
            opt(r.truth.map(|p| p.x)),
            opt(r.truth.map(|p| p.y)),
        ])?;
    }
    finish(w)
}

/// Simulated readings as a receiver log: transmitter `T<k>` for target
/// index `k - 1`, receiver ids from the scenario, truth columns filled.
pub fn observations_from_samples(scenario: &Scenario, samples: &[RssiSample]) -> Vec<ObservationRecord> {
    samples
        .iter()
        .enumerate()
        .map(|(i, s)| ObservationRecord {
            tx_id: format!("T{}", s.target_index + 1),
            rx_id: scenario.anchors[s.anchor_index].id.clone(),
            rssi_dbm: s.rssi_dbm,
            snr_db: None,
            timestamp: None,
            truth: Some(scenario.targets[s.target_index]),
            line: i as u64 + 2,
        })
        .collect()
}

/// Observations of one transmitter, in first-seen order.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmitterLog {
    pub tx_id: String,
    /// Mean RSSI per receiver id, dBm.
    pub mean_rssi_dbm: BTreeMap<String, f64>,
    pub truth: Option<Point2>,
}

/// Groups records by transmitter and averages RSSI (in dBm) per receiver.
pub fn average_by_receiver(records: &[ObservationRecord]) -> Result<Vec<TransmitterLog>> {
    let mut order: Vec<String> = Vec::new();
    let mut sums: BTreeMap<String, BTreeMap<String, (f64, usize)>> = BTreeMap::new();
    let mut truths: BTreeMap<String, Point2> = BTreeMap::new();
    for r in records {
        if !sums.contains_key(&r.tx_id) {
            order.push(r.tx_id.clone());
        }
        let entry = sums
            .entry(r.tx_id.clone())
            .or_default()
            .entry(r.rx_id.clone())
            .or_insert((0.0, 0));
        entry.0 += r.rssi_dbm;
        entry.1 += 1;
        if let Some(t) = r.truth {
            match truths.get(&r.tx_id) {
                Some(prev) if *prev != t => {
                    return Err(Error::Row {
                        line: r.line,
                        message: format!("conflicting truth position for transmitter {}", r.tx_id),
                    })
                }
                _ => {
                    truths.insert(r.tx_id.clone(), t);
                }
            }
        }
    }
    Ok(order
        .into_iter()
        .map(|tx| {
            let mean_rssi_dbm = sums[&tx]
                .iter()
                .map(|(rx, (sum, n))| (rx.clone(), sum / *n as f64))
                .collect();
            TransmitterLog {
                truth: truths.get(&tx).copied(),
                tx_id: tx,
                mean_rssi_dbm,
            }
        })
        .collect())
}

pub fn parse_ranging_samples(text: &str) -> Result<Vec<RangingSample>> {
    let (cols, rows) = records(text, &RANGING_HEADER)?;
    rows.iter()
        .map(|rec| {
            let line = line_of(rec);
            let distance_m = cols.number(rec, "distance_m", line)?;
            if distance_m <= 0.0 {
                return Err(Error::Row {
                    line,
                    message: format!("distance_m must be > 0, got {distance_m}"),
                });
            }
            Ok(RangingSample::new(
                distance_m,
                cols.number(rec, "rssi_dbm", line)?,
                cols.number(rec, "tx_power_dbm", line)?,
            ))
        })
        .collect()
}

pub fn write_ranging_samples(samples: &[RangingSample]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RANGING_HEADER)?;
    for s in samples {
        w.write_record([
            s.distance_m.to_string(),
            s.rssi_dbm.to_string(),
            s.tx_power_dbm.to_string(),
        ])?;
    }
    finish(w)
}

pub fn parse_anchors(text: &str) -> Result<Vec<AnchorNode>> {
    let (cols, rows) = records(text, &ANCHOR_HEADER)?;
    let anchors = rows
        .iter()
        .map(|rec| {
            let line = line_of(rec);
            Ok(AnchorNode::new(
                cols.required(rec, "rx_id", line)?,
                cols.number(rec, "x_m", line)?,
                cols.number(rec, "y_m", line)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen = std::collections::BTreeSet::new();
    if let Some(dup) = anchors.iter().find(|a| !seen.insert(a.id.as_str())) {
        return Err(Error::Schema(format!("duplicate rx_id `{}`", dup.id)));
    }
    Ok(anchors)
}

pub fn write_anchors(anchors: &[AnchorNode]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ANCHOR_HEADER)?;
    for a in anchors {
        w.write_record([a.id.clone(), a.position.x.to_string(), a.position.y.to_string()])?;
    }
    finish(w)
}

/// Accepts JSON or flat `key = value` / `key: value` lines (`#` comments).
pub fn parse_model(text: &str) -> Result<PathLossModel> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return Ok(serde_json::from_str(trimmed)?);
    }
    let mut fields: BTreeMap<&str, f64> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| Error::Row {
                line: i as u64 + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
        let key = key.trim();
        if !["plo_db", "eta", "d0_m"].contains(&key) {
            return Err(Error::Row {
                line: i as u64 + 1,
                message: format!("unknown model key `{key}`"),
            });
        }
        fields.insert(key, parse_number(value.trim(), key, i as u64 + 1)?);
    }
    let get = |k: &str| {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| Error::Schema(format!("model is missing `{k}`")))
    };
    PathLossModel::new(
        get("plo_db")?,
        get("eta")?,
        fields.get("d0_m").copied().unwrap_or(crate::pathloss::DEFAULT_D0_M),
    )
}

pub fn write_model(model: &PathLossModel) -> Result<String> {
    Ok(serde_json::to_string_pretty(model)? + "\n")
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario = serde_json::from_str(text)?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn write_scenario(scenario: &Scenario) -> Result<String> {
    Ok(serde_json::to_string_pretty(scenario)? + "\n")
}

/// Footer: `summary,<method>,<placements>,<min_er_m>,<max_er_m>,<ger_m>`.
pub fn write_report(report: &LocalizationReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_HEADER)?;
    for (i, p) in report.per_placement.iter().enumerate() {
        w.write_record([
            i.to_string(),
            p.actual.x.to_string(),
            p.actual.y.to_string(),
            p.estimated.x.to_string(),
            p.estimated.y.to_string(),
            p.er_m.to_string(),
        ])?;
    }
    w.write_record([
        SUMMARY_TAG.to_string(),
        report.method.to_string(),
        report.len().to_string(),
        report.min_er_m.to_string(),
        report.max_er_m.to_string(),
        report.ger_m.to_string(),
    ])?;
    finish(w)
}

pub fn parse_report(text: &str) -> Result<LocalizationReport> {
    let (cols, rows) = records(text, &REPORT_HEADER)?;
    let mut per_placement = Vec::new();
    let mut footer = None;
    for rec in &rows {
        let line = line_of(rec);
        if cols.get(rec, "placement_index") == Some(SUMMARY_TAG) {
            let field = |i: usize| rec.get(i).map(str::trim).unwrap_or("");
            let method: Method = field(1).parse()?;
            let count: usize = field(2).parse().map_err(|_| Error::Row {
                line,
                message: format!("bad placement count `{}`", field(2)),
            })?;
            footer = Some((
                method,
                count,
                parse_number(field(3), "min_er_m", line)?,
                parse_number(field(4), "max_er_m", line)?,
                parse_number(field(5), "ger_m", line)?,
            ));
            continue;
        }
        per_placement.push(Placement {
            actual: Point2::new(cols.number(rec, "actual_x", line)?, cols.number(rec, "actual_y", line)?),
            estimated: Point2::new(cols.number(rec, "est_x", line)?, cols.number(rec, "est_y", line)?),
            er_m: cols.number(rec, "er_m", line)?,
        });
    }
    let (method, count, min_er_m, max_er_m, ger_m) =
        footer.ok_or_else(|| Error::Schema("report has no summary row".into()))?;
    if count != per_placement.len() {
        return Err(Error::Schema(format!(
            "summary counts {count} placements, file has {}",
            per_placement.len()
        )));
    }
    Ok(LocalizationReport {
        method,
        per_placement,
        ger_m,
        min_er_m,
        max_er_m,
    })
}

/// Footer: `summary,<mean_ger_tri_m>,<mean_ger_multi_m>,<multi_win_rate>`.
pub fn write_comparison(report: &ComparisonReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COMPARISON_HEADER)?;
    for (i, (t, m)) in report.ger_tri.iter().zip(&report.ger_multi).enumerate() {
        let wins = *m < *t - crate::simulator::TIE_TOLERANCE_M;
        w.write_record([i.to_string(), t.to_string(), m.to_string(), u8::from(wins).to_string()])?;
    }
    w.write_record([
        SUMMARY_TAG.to_string(),
        report.mean_ger_tri.to_string(),
        report.mean_ger_multi.to_string(),
        report.multi_win_rate.to_string(),
    ])?;
    finish(w)
}

pub fn parse_comparison(text: &str) -> Result<ComparisonReport> {
    let (cols, rows) = records(text, &COMPARISON_HEADER)?;
    let (mut ger_tri, mut ger_multi) = (Vec::new(), Vec::new());
    let mut footer = None;
    for rec in &rows {
        let line = line_of(rec);
        if cols.get(rec, "replication") == Some(SUMMARY_TAG) {
            footer = Some((
                cols.number(rec, "ger_tri_m", line)?,
                cols.number(rec, "ger_multi_m", line)?,
                cols.number(rec, "multi_wins", line)?,
            ));
            continue;
        }
        ger_tri.push(cols.number(rec, "ger_tri_m", line)?);
        ger_multi.push(cols.number(rec, "ger_multi_m", line)?);
    }
    let (mean_ger_tri, mean_ger_multi, multi_win_rate) =
        footer.ok_or_else(|| Error::Schema("comparison has no summary row".into()))?;
    Ok(ComparisonReport {
        replications: ger_tri.len(),
        ger_tri,
        ger_multi,
        multi_win_rate,
        mean_ger_tri,
        mean_ger_multi,
    })
}

/// `points` evenly spaced distances over `[dmin, dmax]` with the predicted RSSI.
pub fn rssi_curve(
    model: &PathLossModel,
    tx_power_dbm: f64,
    dmin_m: f64,
    dmax_m: f64,
    points: usize,
) -> Result<Vec<(f64, f64)>> {
    if !(dmin_m > 0.0 && dmax_m > dmin_m && dmax_m.is_finite()) {
        return Err(Error::Argument(format!(
            "need 0 < dmin < dmax, got dmin={dmin_m}, dmax={dmax_m}"
        )));
    }
    if points < 2 {
        return Err(Error::Argument(format!("need at least 2 points, got {points}")));
    }
    (0..points)
        .map(|i| {
            let d = dmin_m + (dmax_m - dmin_m) * i as f64 / (points - 1) as f64;
            Ok((d, model.predict_rssi(tx_power_dbm, d)?))
        })
        .collect()
}

pub fn write_curve(curve: &[(f64, f64)]) -> Result<String> {
    let mut out = CURVE_HEADER.join(",");
    out.push('\n');
    for (d, r) in curve {
        writeln!(out, "{d},{r}").expect("write to String");
    }
    Ok(out)
}

pub fn parse_curve(text: &str) -> Result<Vec<(f64, f64)>> {
    let (cols, rows) = records(text, &CURVE_HEADER)?;
    rows.iter()
        .map(|rec| {
            let line = line_of(rec);
            Ok((cols.number(rec, "distance_m", line)?, cols.number(rec, "rssi_dbm", line)?))
        })
        .collect()
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_to_string(path: impl AsRef<Path>) -> Result<String> {
    let path = path.as_ref();
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::summarize;
    use proptest::prelude::*;

    const HEADER: &str = "tx_id,rx_id,rssi_dbm,snr_db,timestamp,truth_x_m,truth_y_m\n";

    #[test]
    fn observation_with_optionals_absent() {
        let recs = parse_observations(&format!("{HEADER}T1,R1,-54.6,,,,\n"), true).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!((r.tx_id.as_str(), r.rx_id.as_str(), r.rssi_dbm), ("T1", "R1", -54.6));
        assert_eq!((r.snr_db, r.timestamp.as_deref(), r.truth), (None, None, None));
        assert_eq!(r.line, 2);
    }

    #[test]
    fn observation_with_all_fields() {
        let text = format!("{HEADER}T1,Rx2,-60.25,7.5,2020-03-01T10:00:00Z,4,6\n");
        let r = &parse_observations(&text, true).unwrap()[0];
        assert_eq!(r.snr_db, Some(7.5));
        assert_eq!(r.timestamp.as_deref(), Some("2020-03-01T10:00:00Z"));
        assert_eq!(r.truth, Some(Point2::new(4.0, 6.0)));
    }

    #[test]
    fn header_only_depends_on_strict() {
        assert!(matches!(parse_observations(HEADER, true), Err(Error::Schema(_))));
        assert!(parse_observations(HEADER, false).unwrap().is_empty());
    }

    #[test]
    fn observation_errors() {
        match parse_observations(&format!("{HEADER}T1,R1,abc,,,,\n"), true) {
            Err(Error::Row { line: 2, message }) => assert!(message.contains("rssi_dbm")),
            other => panic!("{other:?}"),
        }
        match parse_observations("tx_id,rssi_dbm\nT1,-50\n", true) {
            Err(Error::Schema(m)) => assert!(m.contains("rx_id")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_observations("", false), Err(Error::Schema(_))));
        assert!(matches!(
            parse_observations(&format!("{HEADER}T1,R1,-50,,,4,\n"), true),
            Err(Error::Row { line: 2, .. })
        ));
        assert!(matches!(
            parse_observations(&format!("{HEADER}T1,R1,-50,,,,\nT1,R2,inf,,,,\n"), true),
            Err(Error::Row { line: 3, .. })
        ));
    }

    #[test]
    fn averaging_groups_by_tx_and_rx() {
        let text = format!(
            "{HEADER}T2,R1,-50,,,1,1\nT1,R1,-40,,,,\nT2,R1,-52,,,1,1\nT2,R2,-61,,,,\n"
        );
        let logs = average_by_receiver(&parse_observations(&text, true).unwrap()).unwrap();
        assert_eq!(logs.len(), 2);
        assert_eq!(logs[0].tx_id, "T2");
        assert_eq!(logs[0].mean_rssi_dbm["R1"], -51.0);
        assert_eq!(logs[0].mean_rssi_dbm["R2"], -61.0);
        assert_eq!(logs[0].truth, Some(Point2::new(1.0, 1.0)));
        assert_eq!(logs[1].truth, None);

        let conflict = format!("{HEADER}T1,R1,-50,,,1,1\nT1,R2,-50,,,2,1\n");
        assert!(average_by_receiver(&parse_observations(&conflict, true).unwrap()).is_err());
    }

    #[test]
    fn model_formats() {
        let m = PathLossModel::reference_outdoor();
        assert_eq!(parse_model(&write_model(&m).unwrap()).unwrap(), m);
        let flat = "# fitted\nplo_db = 32.769\neta: 2.185\n";
        assert_eq!(parse_model(flat).unwrap(), m);
        assert!(parse_model("plo_db = 30\n").is_err());
        assert!(parse_model("plo_db = 30\neta = 2\nfoo = 1\n").is_err());
        assert!(parse_model("plo_db = 30\neta = -2\n").is_err());
    }

    #[test]
    fn anchors_keep_file_order() {
        let text = "rx_id,x_m,y_m\nRx4,9,5\nRx1,2,6\nRx2,6,8\n";
        let anchors = parse_anchors(text).unwrap();
        assert_eq!(anchors.iter().map(|a| a.id.as_str()).collect::<Vec<_>>(), ["Rx4", "Rx1", "Rx2"]);
        assert_eq!(parse_anchors(&write_anchors(&anchors).unwrap()).unwrap(), anchors);
        assert!(parse_anchors("rx_id,x_m,y_m\nA,1,1\nA,2,2\n").is_err());
        assert!(parse_anchors("rx_id,x_m\nA,1\n").is_err());
    }

    #[test]
    fn ranging_samples() {
        let text = "distance_m,rssi_dbm,tx_power_dbm\n1,-32.769,0\n10,-54.619,0\n";
        let s = parse_ranging_samples(text).unwrap();
        assert_eq!(s[1], RangingSample::new(10.0, -54.619, 0.0));
        assert_eq!(parse_ranging_samples(&write_ranging_samples(&s).unwrap()).unwrap(), s);
        assert!(matches!(
            parse_ranging_samples("distance_m,rssi_dbm,tx_power_dbm\n0,-30,0\n"),
            Err(Error::Row { line: 2, .. })
        ));
    }

    #[test]
    fn scenario_json_round_trip() {
        let s = crate::simulator::default_field_scenario();
        assert_eq!(parse_scenario(&write_scenario(&s).unwrap()).unwrap(), s);
        let bad = write_scenario(&s.with_sigma(-1.0)).unwrap();
        assert!(parse_scenario(&bad).is_err());
    }

    #[test]
    fn report_layout() {
        let r = summarize(
            &[
                (Point2::new(0.0, 0.0), Point2::new(3.0, 4.0)),
                (Point2::new(1.0, 1.0), Point2::new(1.0, 2.0)),
            ],
            Method::Trilateration,
        )
        .unwrap();
        let text = write_report(&r).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "placement_index,actual_x,actual_y,est_x,est_y,er_m");
        assert_eq!(lines[1], "0,0,0,3,4,5");
        assert_eq!(lines[3], "summary,trilateration,2,1,5,3");
        assert_eq!(parse_report(&text).unwrap(), r);
        assert!(parse_report("placement_index,actual_x,actual_y,est_x,est_y,er_m\n0,0,0,0,0,0\n").is_err());
    }

    #[test]
    fn curve_layout() {
        let c = rssi_curve(&PathLossModel::reference_outdoor(), 0.0, 1.0, 10.0, 10).unwrap();
        let text = write_curve(&c).unwrap();
        assert!(text.starts_with("distance_m,rssi_dbm\n1,-32.769\n"));
        assert_eq!(parse_curve(&text).unwrap(), c);
        assert!(rssi_curve(&PathLossModel::reference_outdoor(), 0.0, 0.0, 10.0, 10).is_err());
        assert!(rssi_curve(&PathLossModel::reference_outdoor(), 0.0, 1.0, 10.0, 1).is_err());
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![-1e6f64..1e6, -1.0f64..1.0, Just(0.0)]
    }

    proptest! {
        #[test]
        fn report_round_trip(
            pairs in proptest::collection::vec(((finite(), finite()), (finite(), finite())), 1..20),
        ) {
            let pairs: Vec<_> = pairs
                .into_iter()
                .map(|((a, b), (c, d))| (Point2::new(a, b), Point2::new(c, d)))
                .collect();
            let r = summarize(&pairs, Method::Multilateration).unwrap();
            let back = parse_report(&write_report(&r).unwrap()).unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn comparison_round_trip(
            gers in proptest::collection::vec((0.0f64..10.0, 0.0f64..10.0), 1..30),
        ) {
            let (ger_tri, ger_multi): (Vec<f64>, Vec<f64>) = gers.into_iter().unzip();
            let n = ger_tri.len() as f64;
            let c = ComparisonReport {
                replications: ger_tri.len(),
                mean_ger_tri: ger_tri.iter().sum::<f64>() / n,
                mean_ger_multi: ger_multi.iter().sum::<f64>() / n,
                multi_win_rate: ger_tri.iter().zip(&ger_multi).filter(|(t, m)| m < t).count() as f64 / n,
                ger_tri,
                ger_multi,
            };
            prop_assert_eq!(parse_comparison(&write_comparison(&c).unwrap()).unwrap(), c);
        }

        #[test]
        fn observation_round_trip(
            rows in proptest::collection::vec(
                ("[A-Za-z0-9_]{1,6}", "[A-Za-z0-9_]{1,6}", finite(), proptest::option::of(finite()), proptest::option::of((finite(), finite()))),
                1..20,
            ),
        ) {
            let recs: Vec<ObservationRecord> = rows
                .into_iter()
                .enumerate()
                .map(|(i, (tx, rx, rssi, snr, truth))| ObservationRecord {
                    tx_id: tx,
                    rx_id: rx,
                    rssi_dbm: rssi,
                    snr_db: snr,
                    timestamp: None,
                    truth: truth.map(|(x, y)| Point2::new(x, y)),
                    line: i as u64 + 2,
                })
                .collect();
            let back = parse_observations(&write_observations(&recs).unwrap(), true).unwrap();
            prop_assert_eq!(back, recs);
        }
    }
}
