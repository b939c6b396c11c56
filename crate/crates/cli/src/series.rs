//! CSV time series: header `t,x,f_1,...,f_b,rho`, one row per recorded
//! `(t, x)`, with `rho` the channel sum.
//!
//! Values are written in Rust's shortest round-trip form, so reading a file
//! back reproduces the written `f64`s exactly.

use std::io::{Read, Write};

use qlgas::lattice::density_profile;
use qlgas::{LatticeState, Snapshot};

use crate::error::{CliError, Result};

pub fn header(qubits: usize) -> Vec<String> {
    let mut h = vec!["t".to_string(), "x".to_string()];
    h.extend((1..=qubits).map(|i| format!("f_{i}")));
    h.push("rho".into());
    h
}

pub fn write_series<W: Write>(out: W, series: &[Snapshot]) -> Result<()> {
    let Some(first) = series.first() else {
        return Err(CliError::Input("empty series".into()));
    };
    let b = first.state.qubits();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(b))?;
    let mut record = Vec::with_capacity(b + 3);
    for snap in series {
        if snap.state.qubits() != b {
            return Err(CliError::Input(format!(
                "snapshot t={} has {} channels, expected {b}",
                snap.time,
                snap.state.qubits()
            )));
        }
        let rho = density_profile(&snap.state);
        for (x, r) in rho.iter().enumerate() {
            record.clear();
            record.push(snap.time.to_string());
            record.push(x.to_string());
            record.extend(snap.state.site(x).iter().map(|v| format!("{v:?}")));
            record.push(format!("{r:?}"));
            w.write_record(&record)?;
        }
    }
    w.flush().map_err(|e| CliError::Csv(e.to_string()))?;
    Ok(())
}

/// Reads a series written by [`write_series`]. Rows for each `t` must list
/// sites `0..L` in order; the `rho` column is ignored.
pub fn read_series<R: Read>(input: R) -> Result<Vec<Snapshot>> {
    let mut r = csv::Reader::from_reader(input);
    let hdr = r.headers()?.clone();
    let b = hdr.len().checked_sub(3).filter(|&b| b >= 1).ok_or_else(|| CliError::Csv("too few columns".into()))?;
    if hdr.iter().collect::<Vec<_>>() != header(b) {
        return Err(CliError::Csv(format!("unexpected header `{}`", hdr.iter().collect::<Vec<_>>().join(","))));
    }

    let mut series = Vec::new();
    let mut time: Option<u64> = None;
    let mut values: Vec<f64> = Vec::new();
    let mut sites = 0usize;
    let mut finish = |time: u64, values: Vec<f64>, sites: usize| -> Result<()> {
        let state = LatticeState::new(sites, b, values)?;
        series.push(Snapshot { time, state });
        Ok(())
    };
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = i + 2;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let t: u64 = field(0).parse().map_err(|_| CliError::Csv(format!("row {row}: bad t `{}`", field(0))))?;
        let x: usize = field(1).parse().map_err(|_| CliError::Csv(format!("row {row}: bad x `{}`", field(1))))?;
        if time != Some(t) {
            if let Some(prev) = time {
                if t <= prev {
                    return Err(CliError::Csv(format!("row {row}: t = {t} does not increase")));
                }
                finish(prev, std::mem::take(&mut values), sites)?;
            }
            time = Some(t);
            sites = 0;
        }
        if x != sites {
            return Err(CliError::Csv(format!("row {row}: expected x = {sites}, found {x}")));
        }
        for k in 2..2 + b {
            let v: f64 = field(k).parse().map_err(|_| CliError::Csv(format!("row {row}: bad value `{}`", field(k))))?;
            values.push(v);
        }
        sites += 1;
    }
    match time {
        Some(t) => finish(t, values, sites)?,
        None => return Err(CliError::Csv("no data rows".into())),
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snap(time: u64, f: Vec<f64>) -> Snapshot {
        Snapshot { time, state: LatticeState::new(f.len() / 2, 2, f).unwrap() }
    }

    #[test]
    fn writes_schema() {
        let mut buf = Vec::new();
        write_series(&mut buf, &[snap(0, vec![0.25, 0.5, 1.0, 0.0])]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,x,f_1,f_2,rho\n0,0,0.25,0.5,0.75\n0,1,1.0,0.0,1.0\n");
    }

    #[test]
    fn round_trip_is_exact() {
        let series = vec![
            snap(0, vec![0.1, 1.0 / 3.0, 2e-300, 0.999_999_999_999_999_9]),
            snap(5, vec![std::f64::consts::FRAC_1_SQRT_2, 0.0, 1e-17, 0.5]),
        ];
        let mut buf = Vec::new();
        write_series(&mut buf, &series).unwrap();
        assert_eq!(read_series(buf.as_slice()).unwrap(), series);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(read_series("t,x,f_1,rho\n".as_bytes()).is_err());
        assert!(read_series("t,x,g_1,rho\n0,0,0.1,0.1\n".as_bytes()).is_err());
        assert!(read_series("t,x,f_1,rho\n0,1,0.1,0.1\n".as_bytes()).is_err());
        assert!(read_series("t,x,f_1,rho\n1,0,0.1,0.1\n0,0,0.1,0.1\n".as_bytes()).is_err());
        assert!(read_series("t,x,f_1,rho\n0,0,1.5,1.5\n".as_bytes()).is_err());
        assert!(read_series("t,x,f_1,rho\n0,0,abc,0\n".as_bytes()).is_err());
    }
}
