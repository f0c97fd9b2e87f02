use super::complex::CInterval;
use super::dyadic::Dyadic;
use super::NumError;

/// Default cap on working precision, in bits.
pub const DEFAULT_CEILING: u32 = 4096;
const START: u32 = 64;

/// Precision schedule for adaptive re-evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Refiner {
    pub start: u32,
    pub ceiling: u32,
}

impl Default for Refiner {
    fn default() -> Self {
        Refiner {
            start: START,
            ceiling: DEFAULT_CEILING,
        }
    }
}

impl Refiner {
    pub fn with_ceiling(ceiling: u32) -> Self {
        Refiner { start: START.min(ceiling), ceiling }
    }

    /// Reads `QX_PRECISION_CEILING` (bits) when set.
    pub fn from_env() -> Self {
        match std::env::var("QX_PRECISION_CEILING").ok().and_then(|v| v.trim().parse::<u32>().ok()) {
            Some(c) if c >= 16 => Refiner::with_ceiling(c),
            _ => Refiner::default(),
        }
    }

    /// Working precisions tried in order; identical for every target.
    pub fn schedule(&self) -> impl Iterator<Item = u32> + '_ {
        let mut p = Some(self.start);
        std::iter::from_fn(move || {
            let cur = p?;
            p = if cur >= self.ceiling { None } else { Some((cur * 2).min(self.ceiling)) };
            Some(cur)
        })
    }

    /// Re-evaluate `thunk` at growing precision until its width is at most `target`.
    ///
    /// Domain straddles at low precision are retried; at the ceiling they are
    /// reported as such, and a result that never gets narrow enough yields
    /// [`NumError::MaxPrecision`].
    pub fn run<F>(&self, thunk: F, target: &Dyadic) -> Result<CInterval, NumError>
    where
        F: Fn(u32) -> Result<CInterval, NumError>,
    {
        let mut last_width: Option<Dyadic> = None;
        let mut last_err = None;
        for prec in self.schedule() {
            match thunk(prec) {
                Ok(v) => {
                    let w = v.width();
                    if &w <= target {
                        return Ok(v);
                    }
                    last_width = Some(w);
                    last_err = None;
                }
                Err(e @ NumError::DomainStraddle(_)) => last_err = Some(e),
                Err(NumError::MaxPrecision { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if let Some(e) = last_err {
            if last_width.is_none() {
                return Err(e);
            }
        }
        Err(NumError::MaxPrecision {
            ceiling: self.ceiling,
            last_width_log2: last_width.map(|w| if w.is_zero() { i64::MIN } else { w.msb() + 1 }).unwrap_or(i64::MAX),
        })
    }
}

/// [`Refiner::run`] with the environment's ceiling.
pub fn refine<F>(thunk: F, target: &Dyadic) -> Result<CInterval, NumError>
where
    F: Fn(u32) -> Result<CInterval, NumError>,
{
    Refiner::from_env().run(thunk, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::interval::RInterval;

    #[test]
    fn schedule_doubles_to_ceiling() {
        let r = Refiner::with_ceiling(300);
        assert_eq!(r.schedule().collect::<Vec<_>>(), vec![64, 128, 256, 300]);
    }

    #[test]
    fn never_narrowing_thunk_hits_ceiling() {
        let r = Refiner::with_ceiling(256);
        let res = r.run(|_| Ok(CInterval::real(RInterval::new(Dyadic::zero(), Dyadic::one()))), &Dyadic::pow2(-10));
        assert!(matches!(res, Err(NumError::MaxPrecision { ceiling: 256, .. })));
    }

    #[test]
    fn persistent_straddle_is_reported() {
        let r = Refiner::with_ceiling(128);
        let res = r.run(|_| Err(NumError::DomainStraddle("x".into())), &Dyadic::pow2(-10));
        assert!(matches!(res, Err(NumError::DomainStraddle(_))));
    }
}
