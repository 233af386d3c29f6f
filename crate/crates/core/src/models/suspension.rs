use crate::error::{Error, Result};
use crate::spectra::{DiscreteSystem, Observable, SpectralValue, SuspensionFlow};

/// Roof samples are taken on all periodic points up to this period.
pub const ROOF_SAMPLE_PERIOD: usize = 4;

/// The suspension of `base` under `roof`, after checking that the roof is
/// positive on the periodic points of period at most
/// [`ROOF_SAMPLE_PERIOD`].
pub fn suspend<S, R>(base: S, roof: R) -> Result<SuspensionFlow<S>>
where
    S: DiscreteSystem,
    R: Observable<S::Point> + Send + 'static,
{
    for orbit in base.periodic_orbits(ROOF_SAMPLE_PERIOD)? {
        let mut p = orbit.point.clone();
        for _ in 0..orbit.period {
            let r = roof.evaluate(&p)?.to_f64();
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::InvalidSystem(format!(
                    "roof {} is {r} on the orbit {}",
                    roof.label(),
                    orbit.witness
                )));
            }
            p = base.iterate(&p);
        }
    }
    let label = roof.label();
    Ok(SuspensionFlow::new(base, &label, move |p| {
        roof.evaluate(p).map_or(f64::NAN, |v| v.to_f64())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ToralAutomorphism, TorusPoint};
    use crate::spectra::{flow_section_inclusion, FlowPoint, FnFlowObservable, FnObservable, Smoothness};
    use std::f64::consts::PI;

    fn cos_roof() -> FnObservable<TorusPoint> {
        FnObservable::new("1+0.1cos2pix", Smoothness::Lipschitz(0.2 * PI), |p: &TorusPoint| {
            1.0 + 0.1 * (2.0 * PI * p.to_f64().0).cos()
        })
    }

    #[test]
    fn unit_roof() {
        let t = ToralAutomorphism::cat_map();
        let susp = suspend(t.clone(), FnObservable::constant(1.0)).unwrap();
        let x = TorusPoint::new(1, 2, 5).unwrap();
        let p = FlowPoint { base: x, s: 0.0 };
        assert_eq!(susp.flow(&p, 1.0).unwrap(), FlowPoint { base: t.apply(&x), s: 0.0 });
        assert_eq!(susp.flow(&p, 0.5).unwrap(), FlowPoint { base: x, s: 0.5 });
        assert_eq!(susp.flow(&p, 3.25).unwrap(), FlowPoint { base: t.apply(&t.apply(&t.apply(&x))), s: 0.25 });
    }

    #[test]
    fn flow_period_is_the_roof_sum() {
        let t = ToralAutomorphism::cat_map();
        let roof = cos_roof();
        let susp = suspend(t.clone(), cos_roof()).unwrap();
        for o in t.periodic_orbits(4).unwrap() {
            let mut sum = 0.0;
            let mut y = o.point;
            for _ in 0..o.period {
                sum += roof.evaluate(&y).unwrap();
                y = t.apply(&y);
            }
            let period = susp.flow_period(&o.point, o.period);
            assert!((period - sum).abs() < 1e-12);
            let back = susp
                .flow(&FlowPoint { base: o.point, s: 0.0 }, period - 1e-9)
                .unwrap();
            assert_eq!(back.base, t.apply_inverse(&o.point));
            assert!((back.s + 1e-9 - susp.roof(&back.base)).abs() < 1e-9);
        }
    }

    #[test]
    fn nonpositive_roofs_are_rejected() {
        let t = ToralAutomorphism::cat_map();
        let bad = FnObservable::new("cos2pix", Smoothness::Exact, |p: &TorusPoint| (2.0 * PI * p.to_f64().0).cos());
        assert!(suspend(t, bad).is_err());
    }

    #[test]
    fn cat_map_flow_inclusion() {
        let susp = suspend(ToralAutomorphism::cat_map(), FnObservable::constant(1.0)).unwrap();
        let f = FnFlowObservable::new("cos2pix+s", Some(1.0), |p: &TorusPoint, s| (2.0 * PI * p.to_f64().0).cos() + s);
        let r = flow_section_inclusion(&susp, &f, 3).unwrap();
        assert_eq!(r.orbits, 8);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }
}
