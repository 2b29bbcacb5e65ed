//! Regression metrics.
//!
//! With `y` the truth, `yhat` the predictions and `ybar` the mean of `y`:
//!
//! - SSE  = sum((y_i - yhat_i)^2)
//! - MSE  = SSE / n
//! - RMSE = sqrt(MSE)
//! - SST  = sum((y_i - ybar)^2)
//! - SSR  = sum((yhat_i - ybar)^2), the explained sum of squares
//! - R^2  = 1 - SSE / SST
//!
//! R^2 uses the residual sum in its numerator, so a perfect fit scores 1 and
//! the constant mean predictor scores 0. It is unbounded below. SSR is
//! reported alongside for inspection only.
//!
//! Every sum runs left to right.

use serde::Serialize;

use crate::error::{Error, Result};

fn check(y: &[f64], yhat: &[f64]) -> Result<()> {
    if y.len() != yhat.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: yhat.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::EmptyInput);
    }
    if y.iter().chain(yhat).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn sum_sq_dev(values: &[f64], center: impl Fn(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let r = v - center(i);
        acc += r * r;
    }
    acc
}

pub fn mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(values.iter().fold(0.0, |acc, v| acc + v) / values.len() as f64)
}

pub fn sse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    check(y, yhat)?;
    Ok(sum_sq_dev(y, |i| yhat[i]))
}

pub fn mse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    Ok(sse(y, yhat)? / y.len() as f64)
}

pub fn rmse(y: &[f64], yhat: &[f64]) -> Result<f64> {
    Ok(mse(y, yhat)?.sqrt())
}

pub fn sst(y: &[f64], ybar: f64) -> Result<f64> {
    if y.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(sum_sq_dev(y, |_| ybar))
}

pub fn ssr(yhat: &[f64], ybar: f64) -> Result<f64> {
    if yhat.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(sum_sq_dev(yhat, |_| ybar))
}

/// Fails with [`Error::UndefinedRSquared`] when `y` is constant.
pub fn r_squared(y: &[f64], yhat: &[f64]) -> Result<f64> {
    let residual = sse(y, yhat)?;
    let total = sst(y, mean(y)?)?;
    r_squared_from(residual, total)
}

fn r_squared_from(sse: f64, sst: f64) -> Result<f64> {
    if sst == 0.0 {
        return Err(Error::UndefinedRSquared);
    }
    Ok(1.0 - sse / sst)
}

/// All metrics for one prediction vector. `r_squared` is `None` when the
/// truth is constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    pub n: usize,
    pub sse: f64,
    pub mse: f64,
    pub rmse: f64,
    pub r_squared: Option<f64>,
    pub ssr: f64,
    pub sst: f64,
}

impl MetricReport {
    pub fn new(y: &[f64], yhat: &[f64]) -> Result<Self> {
        let sse = sse(y, yhat)?;
        let n = y.len();
        let mse = sse / n as f64;
        let ybar = mean(y)?;
        let sst = sst(y, ybar)?;
        Ok(MetricReport {
            n,
            sse,
            mse,
            rmse: mse.sqrt(),
            r_squared: r_squared_from(sse, sst).ok(),
            ssr: ssr(yhat, ybar)?,
            sst,
        })
    }
}

pub fn report(y: &[f64], yhat: &[f64]) -> Result<MetricReport> {
    MetricReport::new(y, yhat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sse_examples() {
        assert_eq!(sse(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(sse(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(sse(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), 8.0);
    }

    #[test]
    fn mse_rmse_examples() {
        assert_eq!(mse(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(rmse(&[0.0, 0.0], &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(mse(&[4.0], &[4.0]).unwrap(), 0.0);
        assert_eq!(rmse(&[4.0], &[4.0]).unwrap(), 0.0);
        assert_eq!(mse(&[0.0], &[3.0]).unwrap(), 9.0);
        assert_eq!(rmse(&[0.0], &[3.0]).unwrap(), 3.0);
    }

    #[test]
    fn r_squared_examples() {
        let y = [1.0, 2.0, 3.0];
        assert_eq!(r_squared(&y, &y).unwrap(), 1.0);
        assert_eq!(r_squared(&y, &[2.0, 2.0, 2.0]).unwrap(), 0.0);
        // 1 - 8/2
        assert_eq!(r_squared(&y, &[3.0, 2.0, 1.0]).unwrap(), -3.0);
    }

    #[test]
    fn sum_of_squares_examples() {
        assert_eq!(ssr(&[2.0, 2.0], 2.0).unwrap(), 0.0);
        assert_eq!(sst(&[1.0, 2.0, 3.0], 2.0).unwrap(), 2.0);
        assert_eq!(sst(&[5.0, 5.0], 5.0).unwrap(), 0.0);
        assert!(matches!(sst(&[], 0.0), Err(Error::EmptyInput)));
        assert!(matches!(ssr(&[], 0.0), Err(Error::EmptyInput)));
    }

    #[test]
    fn errors() {
        assert!(matches!(sse(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(rmse(&[], &[]), Err(Error::EmptyInput)));
        assert!(matches!(
            r_squared(&[5.0, 5.0], &[4.0, 6.0]),
            Err(Error::UndefinedRSquared)
        ));
        assert!(matches!(sse(&[f64::NAN], &[1.0]), Err(Error::NonFinite)));
    }

    #[test]
    fn report_examples() {
        let y = [1.0, 2.0, 3.0];
        let perfect = report(&y, &y).unwrap();
        assert_eq!((perfect.sse, perfect.rmse, perfect.r_squared), (0.0, 0.0, Some(1.0)));
        assert_eq!(report(&y, &[2.0; 3]).unwrap().r_squared, Some(0.0));

        let yhat = [1.5, 1.0, 3.5];
        let r = report(&y, &yhat).unwrap();
        assert_eq!(r.n, 3);
        assert_eq!(r.sse, sse(&y, &yhat).unwrap());
        assert_eq!(r.mse, mse(&y, &yhat).unwrap());
        assert_eq!(r.rmse, rmse(&y, &yhat).unwrap());
        assert_eq!(r.r_squared, Some(r_squared(&y, &yhat).unwrap()));
        assert_eq!(r.ssr, ssr(&yhat, 2.0).unwrap());
        assert_eq!(r.sst, sst(&y, 2.0).unwrap());

        let constant = report(&[5.0, 5.0], &[4.0, 6.0]).unwrap();
        assert_eq!(constant.r_squared, None);
        assert_eq!(constant.sse, 2.0);
    }

    #[test]
    fn json_shape() {
        let r = report(&[5.0, 5.0], &[5.0, 5.0]).unwrap();
        let v = serde_json::to_value(r).unwrap();
        assert_eq!(
            v.as_object().unwrap().keys().cloned().collect::<Vec<_>>(),
            vec!["mse", "n", "r_squared", "rmse", "sse", "ssr", "sst"]
        );
        assert!(v["r_squared"].is_null());
    }

    /// Ordinary least squares on one feature, solved in closed form.
    fn ols_fit(x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
        let slope = sxy / sxx;
        x.iter().map(|a| my + slope * (a - mx)).collect()
    }

    fn vec_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (1usize..64).prop_flat_map(|n| {
            (
                prop::collection::vec(-1e3f64..1e3, n),
                prop::collection::vec(-1e3f64..1e3, n),
            )
        })
    }

    proptest! {
        #[test]
        fn identity_chain((y, yhat) in vec_pair()) {
            let r = report(&y, &yhat).unwrap();
            let n = y.len() as f64;
            let rel = |a: f64, b: f64| if b == 0.0 { a.abs() } else { ((a - b) / b).abs() };
            prop_assert!(rel(r.mse, r.sse / n) <= 1e-12);
            prop_assert!(rel(r.rmse, r.mse.sqrt()) <= 1e-12);
        }

        #[test]
        fn perfect_prediction_is_best((y, yhat) in vec_pair()) {
            prop_assert!(rmse(&y, &y).unwrap() <= rmse(&y, &yhat).unwrap());
        }

        #[test]
        fn r_squared_bounded_above((y, yhat) in vec_pair()) {
            if let Ok(r2) = r_squared(&y, &yhat) {
                prop_assert!(r2 <= 1.0);
            }
        }

        #[test]
        fn mean_predictor_scores_zero(y in prop::collection::vec(-1e3f64..1e3, 2..64)) {
            let m = mean(&y).unwrap();
            if let Ok(r2) = r_squared(&y, &vec![m; y.len()]) {
                prop_assert!(r2.abs() <= 1e-12);
            }
        }

        #[test]
        fn r_squared_shift_invariant((y, yhat) in vec_pair(), c in -100.0f64..100.0) {
            let ys: Vec<f64> = y.iter().map(|v| v + c).collect();
            let hs: Vec<f64> = yhat.iter().map(|v| v + c).collect();
            if let (Ok(a), Ok(b)) = (r_squared(&y, &yhat), r_squared(&ys, &hs)) {
                let scale = a.abs().max(1.0);
                prop_assert!((a - b).abs() <= 1e-9 * scale, "{} vs {}", a, b);
            }
        }

        #[test]
        fn ols_decomposition(x in prop::collection::vec(-10.0f64..10.0, 3..50), noise in prop::collection::vec(-1.0f64..1.0, 50)) {
            let y: Vec<f64> = x.iter().zip(&noise).map(|(a, e)| 3.0 * a - 1.0 + e).collect();
            let sxx: f64 = { let m = x.iter().sum::<f64>() / x.len() as f64; x.iter().map(|a| (a - m).powi(2)).sum() };
            prop_assume!(sxx > 1e-6);
            let yhat = ols_fit(&x, &y);
            let r = report(&y, &yhat).unwrap();
            prop_assert!((r.sst - (r.ssr + r.sse)).abs() <= 1e-9 * r.sst);
        }
    }
}
