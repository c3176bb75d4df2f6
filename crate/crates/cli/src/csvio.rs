//! CSV formats. Column orders are fixed; readers verify the exact
//! header before touching any row. Floats are written with Rust's
//! shortest-roundtrip formatting, so reading a file back reproduces the
//! original bits.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use epictrl_core::economy::EconomyValue;
use epictrl_core::{EpisodeLog, Error, Restriction, Result, SeirdState, Trajectory};

pub const TRAJECTORY_HEADER: &str = "day,S,E,I,R,D,economy,economy_norm,action,reward";
pub const TRAINING_HEADER: &str = "episode,length_days,mean_reward,peak_reward,epsilon,final_deaths";
pub const SCHEDULE_HEADER: &str = "day,action";
pub const COMPARISON_HEADER: &str = "input,crossing_cumulative,crossing_current,\
mean_economy_pct,final_economy_pct,total_deaths,length_days,mean_reward,peak_reward";

pub fn trajectory_to_string(trajectory: &Trajectory) -> String {
    let mut out = String::new();
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for p in trajectory.points() {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            p.day,
            p.state.s,
            p.state.e,
            p.state.i,
            p.state.r,
            p.state.d,
            p.economy,
            p.economy_norm,
            p.restriction.code()
        );
        match p.reward {
            Some(r) => {
                let _ = writeln!(out, ",{r}");
            }
            None => out.push_str(",\n"),
        }
    }
    out
}

pub fn write_trajectory(path: &Path, trajectory: &Trajectory) -> Result<()> {
    std::fs::write(path, trajectory_to_string(trajectory))?;
    Ok(())
}

fn parse_float(field: &str, row: usize, column: &str) -> Result<f64> {
    field.parse().map_err(|_| {
        Error::SchemaMismatch(format!(
            "row {row}: column {column} holds {field:?}, expected a number"
        ))
    })
}

fn csv_err(e: csv::Error) -> Error {
    if e.is_io_error() {
        if let csv::ErrorKind::Io(io) = e.into_kind() {
            return Error::Io(io);
        }
        unreachable!("is_io_error guarantees an I/O kind");
    }
    Error::SchemaMismatch(e.to_string())
}

fn check_header(found: &csv::StringRecord, expected: &str, what: &str) -> Result<()> {
    let found = found.iter().collect::<Vec<_>>().join(",");
    if found != expected {
        return Err(Error::SchemaMismatch(format!(
            "{what} header is {found:?}, expected {expected:?}"
        )));
    }
    Ok(())
}

pub fn read_trajectory(path: &Path) -> Result<Trajectory> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    check_header(&headers, TRAJECTORY_HEADER, "trajectory")?;
    let mut trajectory = Trajectory::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        if record.len() != 10 {
            return Err(Error::SchemaMismatch(format!(
                "row {idx}: {} columns, expected 10",
                record.len()
            )));
        }
        let day: u32 = record[0].parse().map_err(|_| {
            Error::SchemaMismatch(format!("row {idx}: day {:?} is not an integer", &record[0]))
        })?;
        if day as usize != idx {
            return Err(Error::SchemaMismatch(format!(
                "row {idx}: day column reads {day}, days must be contiguous from 0"
            )));
        }
        let state = SeirdState::new(
            parse_float(&record[1], idx, "S")?,
            parse_float(&record[2], idx, "E")?,
            parse_float(&record[3], idx, "I")?,
            parse_float(&record[4], idx, "R")?,
            parse_float(&record[5], idx, "D")?,
        );
        let economy = EconomyValue {
            value: parse_float(&record[6], idx, "economy")?,
            normalized: parse_float(&record[7], idx, "economy_norm")?,
        };
        let action = parse_action(&record[8], idx)?;
        let reward = if record[9].is_empty() {
            None
        } else {
            Some(parse_float(&record[9], idx, "reward")?)
        };
        trajectory.push(state, action, economy, reward);
    }
    if trajectory.is_empty() {
        return Err(Error::SchemaMismatch("trajectory has no rows".into()));
    }
    Ok(trajectory)
}

fn parse_action(field: &str, row: usize) -> Result<Restriction> {
    Restriction::from_str(field).map_err(|_| {
        Error::SchemaMismatch(format!(
            "row {row}: action {field:?} is not a restriction code or name"
        ))
    })
}

pub fn training_to_string(episodes: &[EpisodeLog]) -> String {
    let mut out = String::new();
    out.push_str(TRAINING_HEADER);
    out.push('\n');
    for log in episodes {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            log.episode,
            log.length_days,
            log.mean_reward,
            log.peak_reward,
            log.epsilon,
            log.final_state.d
        );
    }
    out
}

pub fn write_training(path: &Path, episodes: &[EpisodeLog]) -> Result<()> {
    std::fs::write(path, training_to_string(episodes))?;
    Ok(())
}

pub fn schedule_to_string(actions: &[Restriction]) -> String {
    let mut out = String::new();
    out.push_str(SCHEDULE_HEADER);
    out.push('\n');
    for (day, action) in actions.iter().enumerate() {
        let _ = writeln!(out, "{day},{}", action.code());
    }
    out
}

pub fn write_schedule(path: &Path, actions: &[Restriction]) -> Result<()> {
    std::fs::write(path, schedule_to_string(actions))?;
    Ok(())
}

/// Reads a day-indexed action schedule; days must be contiguous from 0.
pub fn read_schedule(path: &Path) -> Result<Vec<Restriction>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(csv_err)?;
    let headers = reader.headers().map_err(csv_err)?.clone();
    check_header(&headers, SCHEDULE_HEADER, "schedule")?;
    let mut actions = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        if record.len() != 2 {
            return Err(Error::SchemaMismatch(format!(
                "row {idx}: {} columns, expected 2",
                record.len()
            )));
        }
        let day: u32 = record[0].parse().map_err(|_| {
            Error::SchemaMismatch(format!("row {idx}: day {:?} is not an integer", &record[0]))
        })?;
        if day as usize != idx {
            return Err(Error::SchemaMismatch(format!(
                "row {idx}: day column reads {day}, days must be contiguous from 0"
            )));
        }
        actions.push(parse_action(&record[1], idx)?);
    }
    if actions.is_empty() {
        return Err(Error::SchemaMismatch("schedule has no rows".into()));
    }
    Ok(actions)
}

/// One comparison row; `None` statistics print as empty fields.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub input: String,
    pub crossing_cumulative: Option<u32>,
    pub crossing_current: Option<u32>,
    pub mean_economy_pct: f64,
    pub final_economy_pct: f64,
    pub total_deaths: f64,
    pub length_days: u32,
    pub mean_reward: Option<f64>,
    pub peak_reward: Option<f64>,
}

fn opt_u32(v: Option<u32>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn comparison_to_string(rows: &[ComparisonRow]) -> String {
    let mut out = String::new();
    out.push_str(COMPARISON_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.input,
            opt_u32(row.crossing_cumulative),
            opt_u32(row.crossing_current),
            row.mean_economy_pct,
            row.final_economy_pct,
            row.total_deaths,
            row.length_days,
            opt_f64(row.mean_reward),
            opt_f64(row.peak_reward),
        );
    }
    out
}

pub fn write_comparison(path: &Path, rows: &[ComparisonRow]) -> Result<()> {
    std::fs::write(path, comparison_to_string(rows))?;
    Ok(())
}
