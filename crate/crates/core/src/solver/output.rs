//! Snapshot CSV and raw field dumps.

use std::io::{self, Read, Write};

use super::run::{FieldState, Snapshot};

pub const CSV_HEADER: [&str; 8] = ["t", "component", "sup_u", "sup_ut", "sup_du", "weighted_kg", "weighted_wave", "energy"];

/// One row per snapshot and component; floats are written with
/// round-trip precision so reruns compare byte for byte.
pub fn write_snapshots_csv<W: Write>(snapshots: &[Snapshot], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for s in snapshots {
        for (k, c) in s.components.iter().enumerate() {
            w.write_record([
                format!("{:?}", s.t),
                (k + 1).to_string(),
                format!("{:?}", c.sup_u),
                format!("{:?}", c.sup_ut),
                format!("{:?}", c.sup_du),
                format!("{:?}", c.weighted_kg),
                format!("{:?}", c.weighted_wave),
                format!("{:?}", s.energy),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// A parsed CSV row.
#[derive(Clone, Debug, PartialEq, serde::Deserialize)]
pub struct SeriesRow {
    pub t: f64,
    pub component: usize,
    pub sup_u: f64,
    pub sup_ut: f64,
    pub sup_du: f64,
    pub weighted_kg: f64,
    pub weighted_wave: f64,
    pub energy: f64,
}

pub fn read_series_csv<R: Read>(input: R) -> csv::Result<Vec<SeriesRow>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

const MAGIC: &[u8; 4] = b"WKGF";

/// Grid description stored in a dump header.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DumpGrid {
    Radial { nr: u64, dr: f64 },
    Cartesian { n: u64, h: f64 },
}

/// Little-endian layout: `"WKGF"`, mode byte (0 radial, 1 Cartesian),
/// `N: u64`, grid size `u64`, spacing `f64`, `t: f64`, then `u` and `∂_t u`
/// for every component in row-major order.
pub fn write_field_dump<W: Write>(state: &FieldState, grid: DumpGrid, mut out: W) -> io::Result<()> {
    out.write_all(MAGIC)?;
    let (mode, size, spacing) = match grid {
        DumpGrid::Radial { nr, dr } => (0u8, nr, dr),
        DumpGrid::Cartesian { n, h } => (1u8, n, h),
    };
    out.write_all(&[mode])?;
    out.write_all(&(state.u.len() as u64).to_le_bytes())?;
    out.write_all(&size.to_le_bytes())?;
    out.write_all(&spacing.to_le_bytes())?;
    out.write_all(&state.t.to_le_bytes())?;
    for field in state.u.iter().chain(&state.ut) {
        for v in field {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_field_dump<R: Read>(mut input: R) -> io::Result<(DumpGrid, FieldState)> {
    let bad = |m: &str| io::Error::new(io::ErrorKind::InvalidData, m.to_string());
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("not a field dump"));
    }
    let mut mode = [0u8; 1];
    input.read_exact(&mut mode)?;
    let mut b8 = [0u8; 8];
    let mut next = |input: &mut R| -> io::Result<[u8; 8]> {
        input.read_exact(&mut b8)?;
        Ok(b8)
    };
    let n = u64::from_le_bytes(next(&mut input)?) as usize;
    let size = u64::from_le_bytes(next(&mut input)?);
    let spacing = f64::from_le_bytes(next(&mut input)?);
    let t = f64::from_le_bytes(next(&mut input)?);
    let (grid, len) = match mode[0] {
        0 => (DumpGrid::Radial { nr: size, dr: spacing }, size as usize),
        1 => (DumpGrid::Cartesian { n: size, h: spacing }, (size * size * size) as usize),
        _ => return Err(bad("unknown grid mode")),
    };
    let mut state = FieldState::zeros(n, len);
    state.t = t;
    for field in state.u.iter_mut().chain(state.ut.iter_mut()) {
        for v in field.iter_mut() {
            *v = f64::from_le_bytes(next(&mut input)?);
        }
    }
    Ok((grid, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::run::ComponentStats;

    #[test]
    fn dump_roundtrip() {
        let mut s = FieldState::zeros(2, 3);
        s.t = 1.25;
        s.u[1][2] = -3.5;
        s.ut[0][1] = 1e-300;
        let mut buf = Vec::new();
        write_field_dump(&s, DumpGrid::Radial { nr: 3, dr: 0.5 }, &mut buf).unwrap();
        assert_eq!(buf.len(), 4 + 1 + 32 + 12 * 8);
        let (g, back) = read_field_dump(&buf[..]).unwrap();
        assert_eq!(g, DumpGrid::Radial { nr: 3, dr: 0.5 });
        assert_eq!((back.t, back.u, back.ut), (s.t, s.u, s.ut));
    }

    #[test]
    fn csv_roundtrip() {
        let c = ComponentStats { sup_u: 0.1, sup_ut: 0.2, sup_du: 0.3, weighted_kg: 0.4, weighted_wave: 0.5 };
        let snaps = vec![Snapshot { t: 0.5, components: vec![c.clone(), c], energy: 2.0 }];
        let mut buf = Vec::new();
        write_snapshots_csv(&snaps, &mut buf).unwrap();
        let rows = read_series_csv(&buf[..]).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].component, 2);
        assert_eq!(rows[0].weighted_wave, 0.5);
    }
}
