//! File formats: CSV tables for plotting, JSON for structured results.
//!
//! Numbers are written with Rust's shortest round-trip formatting so reruns
//! produce byte-identical files.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sspe_core::design::ResidualMap;
use sspe_core::fit::Spectrum;
use sspe_core::{DeviceParams, DriveSegment, PulseSchedule, Trajectory};

use crate::error::{CliError, Result};

/// Plain decimal in the usual range, exponent notation for tiny or huge
/// magnitudes.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| CliError::Output { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Output { path: path.to_path_buf(), source })
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    write_file(path, &text)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Device parameters from JSON, validated.
pub fn read_device(path: &Path) -> Result<DeviceParams> {
    let params: DeviceParams = read_json(path)?;
    params.validate()?;
    Ok(params)
}

/// Writes rows under a header line.
pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&fmt_num(*v));
        }
        out.push('\n');
    }
    write_file(path, &out)
}

/// `t_ns,re_alpha,im_alpha,n`
pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    let rows = (0..traj.len()).map(|k| vec![traj.times[k], traj.alpha[k].re, traj.alpha[k].im, traj.photon_number[k]]);
    write_csv(path, &["t_ns", "re_alpha", "im_alpha", "n"], rows)
}

/// `eps_r,phi_r,residual`, one row per grid point, amplitude-major.
pub fn write_map(path: &Path, map: &ResidualMap) -> Result<()> {
    let rows = map
        .amplitude_axis
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| map.phase_axis.iter().enumerate().map(move |(k, &phi)| vec![a, phi, map.at(i, k)]));
    write_csv(path, &["eps_r", "phi_r", "residual"], rows)
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes())
}

/// Reads a numeric table whose header must be exactly `columns`.
pub fn read_columns(path: &Path, columns: &[&str]) -> Result<Vec<Vec<f64>>> {
    let text = read_file(path)?;
    let bad = |msg: String| CliError::Config(format!("{}: {msg}", path.display()));
    let mut rdr = csv_reader(&text);
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != columns {
        return Err(bad(format!(
            "expected header `{}`, found `{}`",
            columns.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let row = record
            .iter()
            .map(|field| field.parse::<f64>().map_err(|_| bad(format!("row {}: `{field}` is not a number", line + 1))))
            .collect::<Result<Vec<f64>>>()?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(bad(format!("row {}: non-finite value", line + 1)));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok(rows)
}

pub fn read_pairs(path: &Path, columns: [&str; 2]) -> Result<Vec<(f64, f64)>> {
    Ok(read_columns(path, &columns)?.into_iter().map(|r| (r[0], r[1])).collect())
}

/// `m,P` with integral measurement indices.
pub fn read_backaction(path: &Path) -> Result<Vec<(u32, f64)>> {
    read_pairs(path, ["m", "P"])?
        .into_iter()
        .map(|(m, p)| {
            if m >= 1.0 && m.fract() == 0.0 && m <= f64::from(u32::MAX) {
                Ok((m as u32, p))
            } else {
                Err(CliError::Config(format!("{}: measurement index {m} is not a positive integer", path.display())))
            }
        })
        .collect()
}

/// Long-format spectroscopy `delay_ns,freq_mhz,amplitude`, grouped by delay
/// in order of first appearance.
pub fn read_spectra(path: &Path) -> Result<Vec<Spectrum>> {
    let mut spectra: Vec<Spectrum> = Vec::new();
    for row in read_columns(path, &["delay_ns", "freq_mhz", "amplitude"])? {
        match spectra.iter_mut().find(|s| s.delay == row[0]) {
            Some(s) => {
                s.freqs.push(row[1]);
                s.amplitudes.push(row[2]);
            }
            None => spectra.push(Spectrum { delay: row[0], freqs: vec![row[1]], amplitudes: vec![row[2]] }),
        }
    }
    Ok(spectra)
}

pub fn write_spectra(path: &Path, spectra: &[Spectrum]) -> Result<()> {
    let rows = spectra.iter().flat_map(|s| s.freqs.iter().zip(&s.amplitudes).map(move |(f, a)| vec![s.delay, *f, *a]));
    write_csv(path, &["delay_ns", "freq_mhz", "amplitude"], rows)
}

/// A schedule given either inline (`[{"amp": …, "phase": …, "duration": …}]`)
/// or as a path to a JSON file with that content.
pub fn read_schedule(spec: &str) -> Result<PulseSchedule> {
    let text = if spec.trim_start().starts_with('[') { spec.to_string() } else { read_file(Path::new(spec))? };
    let raw: Vec<DriveSegment> = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("schedule: {e}")))?;
    let segments = raw
        .into_iter()
        .map(|s| DriveSegment::new(s.amplitude, s.phase, s.duration))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(PulseSchedule::custom(segments)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sspe_core::{Complex, QubitState};

    #[test]
    fn number_format_round_trips() {
        for x in [0.0, 1.0, -2.5, 1e-20, 3.7e-3, 123456.789, 1e300, -6.02e23, 0.1 + 0.2] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_num(1e-20), "1e-20");
        assert_eq!(fmt_num(0.5), "0.5");
    }

    #[test]
    fn trajectory_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let tr =
            Trajectory::new(vec![0.0, 1.0], vec![Complex::new(0.0, 0.0), Complex::new(1.0, -2.0)], QubitState::Ground);
        write_trajectory(&path, &tr).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "t_ns,re_alpha,im_alpha,n\n0,0,0,0\n1,1,-2,5\n");
        let back = read_columns(&path, &["t_ns", "re_alpha", "im_alpha", "n"]).unwrap();
        assert_eq!(back[1], vec![1.0, 1.0, -2.0, 5.0]);
    }

    #[test]
    fn header_mismatch_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        fs::write(&path, "time,S\n0,0.5\n").unwrap();
        assert!(matches!(read_pairs(&path, ["t", "S"]), Err(CliError::Config(_))));
        fs::write(&path, "t,S\n0,abc\n").unwrap();
        assert!(matches!(read_pairs(&path, ["t", "S"]), Err(CliError::Config(_))));
        fs::write(&path, "m,P\n1.5,0.5\n").unwrap();
        assert!(read_backaction(&path).is_err());
    }

    #[test]
    fn inline_schedule() {
        let s =
            read_schedule(r#"[{"amp": -0.1, "phase": 0.0, "duration": 10}, {"amp": 0, "phase": 1, "duration": 5}]"#)
                .unwrap();
        assert_eq!(s.segments().len(), 2);
        assert!((s.segments()[0].phase - std::f64::consts::PI).abs() < 1e-15);
        assert!(read_schedule(r#"[{"amp": 0.1, "phase": 0.0, "duration": -1}]"#).is_err());
        assert!(read_schedule("[]").is_err());
    }

    #[test]
    fn spectra_grouping() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let spectra = vec![
            Spectrum { delay: 0.0, freqs: vec![1.0, 2.0], amplitudes: vec![0.1, 0.2] },
            Spectrum { delay: 10.0, freqs: vec![1.0, 2.0], amplitudes: vec![0.3, 0.4] },
        ];
        write_spectra(&path, &spectra).unwrap();
        assert_eq!(read_spectra(&path).unwrap(), spectra);
    }
}
