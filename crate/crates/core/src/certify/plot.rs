//! CSV output for plotting. Columns are fixed and documented in the README.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::CertifyError;
use crate::number::{Interval, Scalar};
use crate::random::{TrajectoryRecord, Tube};

pub const TRAJECTORY_HEADER: &str = "index,state,fibre";
pub const FIBRE_HEADER: &str = "block,index,state,lower,upper,hull_diameter";

/// Writes `index,state,fibre` rows; the fibre column is empty when unlabelled.
/// Exact states are written as `p/q`.
pub fn write_trajectory_csv<S: Scalar, W: Write>(
    out: &mut W,
    records: &[TrajectoryRecord<S>],
) -> Result<(), CertifyError> {
    writeln!(out, "{TRAJECTORY_HEADER}")?;
    for r in records {
        let fibre = r.fibre_label.map(|l| l.to_string()).unwrap_or_default();
        writeln!(out, "{},{},{}", r.base_index, r.state, fibre)?;
    }
    Ok(())
}

/// Writes the fibre `S_ℓ` of a tube: one row per block `m` with the enclosure
/// of `φ(mk + ℓ, ω, x(ω))` and the diameter of the hull of the fibre so far,
/// all rounded outward to doubles.
pub fn write_fibre_csv<S: Scalar, W: Write>(out: &mut W, tube: &Tube<S>, fibre: usize) -> Result<(), CertifyError> {
    writeln!(out, "{FIBRE_HEADER}")?;
    let mut hull: Option<Interval<S>> = None;
    for (block, (t, i)) in tube.intervals.iter().enumerate().skip(fibre).step_by(tube.period).enumerate() {
        let h = match hull {
            Some(h) => h.hull(i),
            None => i.clone(),
        };
        let (lo, hi) = (i.lo().to_rational().to_f64_down(), i.hi().to_rational().to_f64_up());
        let diam = h.width().to_rational().to_f64_up();
        writeln!(out, "{block},{},{},{lo},{hi},{diam}", tube.start_index + t as i64, i.midpoint().to_f64())?;
        hull = Some(h);
    }
    Ok(())
}

/// Writes `<stem>_trajectory.csv` (tube midpoints) and one
/// `<stem>_fibre_<ℓ>.csv` per fibre into `dir`; returns the paths written.
pub fn emit_plot_data<S: Scalar>(dir: &Path, stem: &str, tube: &Tube<S>) -> Result<Vec<PathBuf>, CertifyError> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    let traj_path = dir.join(format!("{stem}_trajectory.csv"));
    let records: Vec<TrajectoryRecord<f64>> = tube
        .trajectory()
        .into_iter()
        .map(|r| TrajectoryRecord { base_index: r.base_index, state: r.state.to_f64(), fibre_label: r.fibre_label })
        .collect();
    let mut w = BufWriter::new(File::create(&traj_path)?);
    write_trajectory_csv(&mut w, &records)?;
    w.flush()?;
    paths.push(traj_path);
    for l in 0..tube.period {
        let p = dir.join(format!("{stem}_fibre_{l}.csv"));
        let mut w = BufWriter::new(File::create(&p)?);
        write_fibre_csv(&mut w, tube, l)?;
        w.flush()?;
        paths.push(p);
    }
    Ok(paths)
}

/// Writes a trajectory to `path`.
pub fn write_trajectory_file<S: Scalar>(path: &Path, records: &[TrajectoryRecord<S>]) -> Result<(), CertifyError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_trajectory_csv(&mut w, records)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conley::{build_neighborhood, NeighborhoodOptions};
    use crate::cycles::enumerate_tent_cycles;
    use crate::random::{build_tube, cocycle_iterate, NoiseModel};
    use crate::{rat, PiecewiseAffineMap, Rational};

    #[test]
    fn empty_trajectory_is_header_only() {
        let mut buf = Vec::new();
        write_trajectory_csv::<Rational, _>(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,state,fibre\n");
    }

    #[test]
    fn exact_states_are_fractions() {
        let noise = NoiseModel::deterministic(Rational::one()).unwrap();
        let traj = cocycle_iterate(&noise, &rat(2, 7), 2).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&mut buf, &traj).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "index,state,fibre\n0,2/7,\n1,4/7,\n2,6/7,\n");
    }

    #[test]
    fn three_cycle_gives_three_fibre_files() {
        let c = enumerate_tent_cycles(3).unwrap().into_iter().find(|c| *c.least() == rat(2, 7)).unwrap();
        let opts = NeighborhoodOptions { max_radius: Some(rat(1, 50)) };
        let n = build_neighborhood(&PiecewiseAffineMap::tent(), &c, &opts).unwrap();
        let noise = NoiseModel::deterministic(Rational::one()).unwrap();
        let tube = build_tube(&noise, &n, 0, 30, 10).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_plot_data(dir.path(), "tent3", &tube).unwrap();
        assert_eq!(paths.len(), 4);
        let fibre = std::fs::read_to_string(&paths[1]).unwrap();
        let mut lines = fibre.lines();
        assert_eq!(lines.next(), Some(FIBRE_HEADER));
        assert_eq!(lines.count(), 11);
    }
}
