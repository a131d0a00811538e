use anyhow::{bail, Context, Result};

fn numbers(s: &str) -> Result<Vec<f64>> {
    s.split(':')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number {t:?} in {s:?}")))
        .collect()
}

/// `start:end:step` (inclusive) or `a,b,c`.
pub fn parse_ratios(s: &str) -> Result<Vec<f64>> {
    let out: Vec<f64> = if s.contains(':') {
        let v = numbers(s)?;
        let [start, end, step] = v[..] else {
            bail!("expected start:end:step, got {s:?}");
        };
        if !(step > 0.0) || end < start {
            bail!("empty range {s:?}");
        }
        let n = ((end - start) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect()
    } else {
        s.split(',').map(|t| t.trim().parse::<f64>().with_context(|| format!("bad ratio {t:?}"))).collect::<Result<_>>()?
    };
    if out.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        bail!("training ratios must lie in (0, 1): {s:?}");
    }
    Ok(out)
}

/// `lo:hi` keeps the entries of `ladder` inside the range, `lo:hi:step`
/// steps linearly and `a,b,c` lists sizes.
pub fn parse_sizes(s: &str, ladder: &[usize]) -> Result<Vec<usize>> {
    let int = |t: &str| -> Result<usize> {
        let x: f64 = t.trim().parse().with_context(|| format!("bad size {t:?}"))?;
        if x < 1.0 || x.fract() != 0.0 {
            bail!("bad size {t:?}");
        }
        Ok(x as usize)
    };
    let parts: Vec<&str> = s.split(':').collect();
    let out: Vec<usize> = match parts[..] {
        [lo, hi] => {
            let (lo, hi) = (int(lo)?, int(hi)?);
            ladder.iter().copied().filter(|x| (lo..=hi).contains(x)).collect()
        }
        [lo, hi, step] => {
            let (lo, hi, step) = (int(lo)?, int(hi)?, int(step)?);
            (lo..=hi).step_by(step).collect()
        }
        [_] => s.split(',').map(int).collect::<Result<_>>()?,
        _ => bail!("expected lo:hi, lo:hi:step or a list, got {s:?}"),
    };
    if out.is_empty() {
        bail!("no sizes in {s:?}");
    }
    Ok(out)
}
