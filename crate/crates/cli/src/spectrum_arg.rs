//! `--sys`/`--cat` flag syntax.

use thermocat::hamiltonians::{FiniteSpectrum, Spectrum, UnboundedSpectrum};
use thermocat::Error;

use crate::{usage, Failure};

fn float(s: &str) -> Result<f64, Failure> {
    s.trim().parse().map_err(|_| usage(format!("not a number: {s:?}")))
}

/// `trivial:N`, `levels:E1,E2,…`, `harmonic:HW`, `linear:C,E0` or
/// `@path.json`. Files carry their own `beta`.
pub fn parse_spectrum(arg: &str, beta: f64) -> Result<Spectrum, Failure> {
    if let Some(path) = arg.strip_prefix('@') {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?;
        return Ok(Spectrum::from_json(&v)?);
    }
    let (kind, rest) = arg.split_once(':').ok_or_else(|| usage(format!("bad spectrum {arg:?}")))?;
    let spectrum = match kind {
        "trivial" => {
            let n: usize = rest.trim().parse().map_err(|_| usage(format!("bad dimension {rest:?}")))?;
            if n == 0 {
                return Err(Error::EmptyVector.into());
            }
            Spectrum::Finite(FiniteSpectrum::trivial(n, beta)?)
        }
        "levels" => {
            let levels = rest.split(',').map(float).collect::<Result<Vec<_>, _>>()?;
            Spectrum::Finite(FiniteSpectrum::new(levels, beta)?)
        }
        "harmonic" => Spectrum::Unbounded(UnboundedSpectrum::harmonic(float(rest)?, beta)?),
        "linear" => {
            let (c, e0) = rest.split_once(',').ok_or_else(|| usage("linear needs C,E0"))?;
            Spectrum::Unbounded(UnboundedSpectrum::linear_offset(float(c)?, float(e0)?, beta)?)
        }
        other => return Err(usage(format!("unknown spectrum kind {other:?}"))),
    };
    Ok(spectrum)
}
