//! Family registry: resolves a command-line name to a jet provider.
//!
//! Supported names: `s3s3` (the built-in golden potential), `radial:<file>`
//! (a trajectory CSV with header `t,x,xp,in_S`), and `poly:<file>` (plain
//! text, one monomial per line as `i j k coeff`).

use std::fs;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use nk_core::jets::{radial_phi, s3s3_phi, PhiFamily, Poly3};
use nk_core::radial::RadialSolution;

pub fn resolve_family(spec: &str) -> Result<PhiFamily> {
    if spec == "s3s3" {
        return Ok(s3s3_phi());
    }
    if let Some(path) = spec.strip_prefix("radial:") {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read trajectory file '{path}'"))?;
        let sol = parse_trajectory_csv(&text)
            .with_context(|| format!("cannot parse trajectory file '{path}'"))?;
        return Ok(radial_phi(spec, Arc::new(sol)));
    }
    if let Some(path) = spec.strip_prefix("poly:") {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read coefficient file '{path}'"))?;
        let poly = Poly3::parse(&text)
            .with_context(|| format!("cannot parse coefficient file '{path}'"))?;
        return Ok(PhiFamily::polynomial(spec, poly));
    }
    bail!("unknown family '{spec}' (expected 's3s3', 'radial:<file>' or 'poly:<coeff-file>')")
}

pub fn parse_trajectory_csv(text: &str) -> Result<RadialSolution> {
    let mut samples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("t,") || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 3 {
            bail!("line {}: expected at least t,x,xp", idx + 1);
        }
        let t: f64 = fields[0]
            .parse()
            .with_context(|| format!("line {}: bad t '{}'", idx + 1, fields[0]))?;
        let x: f64 = fields[1]
            .parse()
            .with_context(|| format!("line {}: bad x '{}'", idx + 1, fields[1]))?;
        let xp: f64 = fields[2]
            .parse()
            .with_context(|| format!("line {}: bad xp '{}'", idx + 1, fields[2]))?;
        samples.push((t, x, xp));
    }
    Ok(RadialSolution::from_samples(&samples)?)
}
