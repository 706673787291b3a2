//! Python bindings: a thin `Polynomial` wrapper over the core engine.
//!
//! Numbers cross the boundary as decimal strings (exact reporting) or
//! Python floats (convenience); coefficients are ascending, index `j`
//! holding the coefficient of `x^j`.

use circlesplit::num::{decimal_string, float_from_decimal};
use circlesplit::{fact, mod_k, mod_max, mod_min, nrd, roots, Limits, Poly, Precision};
use circlesplit::BigComplex;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

/// Factor coefficients as `(re, im)` decimal-string pairs, ascending.
type FactorCoeffs = Vec<(String, String)>;

fn num_err(e: circlesplit::Error) -> PyErr {
    match e {
        circlesplit::Error::InvalidInput(msg) => PyValueError::new_err(msg),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn parse_decimal(prec: Precision, text: &str, what: &str) -> PyResult<rug::Float> {
    float_from_decimal(prec, text)
        .ok_or_else(|| PyValueError::new_err(format!("bad decimal for {what}: `{text}`")))
}

/// A complex polynomial with arbitrary-precision coefficients.
#[pyclass]
struct Polynomial {
    poly: Poly,
    bits: u32,
}

#[pymethods]
impl Polynomial {
    /// Builds from `(re, im)` coefficient pairs in ascending degree.
    /// Entries may be floats or decimal strings.
    #[new]
    #[pyo3(signature = (coeffs, bits = 128))]
    fn new(coeffs: Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>)>, bits: u32) -> PyResult<Self> {
        if bits < 53 {
            return Err(PyValueError::new_err("bits must be at least 53"));
        }
        let prec = Precision::new(bits);
        let mut parts = Vec::with_capacity(coeffs.len());
        for (re, im) in &coeffs {
            let re = any_to_float(prec, re)?;
            let im = any_to_float(prec, im)?;
            parts.push(BigComplex::from_parts(re, im));
        }
        Ok(Polynomial {
            poly: Poly::from_coeffs(parts),
            bits,
        })
    }

    /// Degree, `-1` for the zero polynomial.
    #[getter]
    fn degree(&self) -> isize {
        self.poly.degree()
    }

    /// Coefficients as `(re, im)` decimal-string pairs, ascending.
    fn coefficients(&self) -> Vec<(String, String)> {
        self.poly
            .coeffs()
            .iter()
            .map(|c| (decimal_string(c.re()), decimal_string(c.im())))
            .collect()
    }

    /// Evaluates at `re + im*i`, returning decimal strings.
    fn eval(&self, re: f64, im: f64) -> (String, String) {
        let prec = Precision::new(self.bits);
        let z = BigComplex::from_f64(prec, re, im);
        let v = self.poly.eval(&z, prec);
        (decimal_string(v.re()), decimal_string(v.im()))
    }

    /// Factors into linear pieces: returns
    /// `(factors, residual)` where each factor is a list of `(re, im)`
    /// decimal-string coefficient pairs and `residual` is the verified
    /// relative l1 residual as a decimal string.
    #[pyo3(signature = (eps = "1e-10"))]
    fn factor(&self, eps: &str) -> PyResult<(Vec<FactorCoeffs>, String)> {
        let prec = Precision::new(self.bits);
        let eps = parse_decimal(prec, eps, "eps")?;
        let list = fact(&self.poly, &eps, &Limits::default()).map_err(num_err)?;
        let factors = list
            .factors
            .iter()
            .map(|f| -> FactorCoeffs {
                f.coeffs()
                    .iter()
                    .map(|c| (decimal_string(c.re()), decimal_string(c.im())))
                    .collect()
            })
            .collect();
        Ok((factors, decimal_string(&list.residual)))
    }

    /// All roots as `(re, im)` float pairs plus the residual certificate
    /// as a decimal string.
    #[pyo3(signature = (eps = "1e-10"))]
    fn roots(&self, eps: &str) -> PyResult<(Vec<(f64, f64)>, String)> {
        let prec = Precision::new(self.bits);
        let eps = parse_decimal(prec, eps, "eps")?;
        let out = roots(&self.poly, &eps, &Limits::default()).map_err(num_err)?;
        let pairs = out
            .roots
            .iter()
            .map(|r| (r.re().to_f64(), r.im().to_f64()))
            .collect();
        Ok((pairs, decimal_string(&out.residual)))
    }

    /// Number of roots in the disk `|z| < radius`, certified to the
    /// multiplicative log-error `tau`.
    #[pyo3(signature = (radius, tau = 0.001))]
    fn count_in_disk(&self, radius: f64, tau: f64) -> PyResult<usize> {
        let prec = Precision::new(self.bits);
        let r = rug::Float::with_val(prec.bits(), radius);
        nrd(&self.poly, &r, tau, &Limits::default()).map_err(num_err)
    }

    /// Largest root modulus within `e^{+-tau}`, as a float.
    #[pyo3(signature = (tau = 0.001))]
    fn root_modulus_max(&self, tau: f64) -> PyResult<f64> {
        mod_max(&self.poly, tau, &Limits::default())
            .map(|est| est.value.to_f64())
            .map_err(num_err)
    }

    /// Smallest root modulus within `e^{+-tau}`, as a float.
    #[pyo3(signature = (tau = 0.001))]
    fn root_modulus_min(&self, tau: f64) -> PyResult<f64> {
        mod_min(&self.poly, tau, &Limits::default())
            .map(|est| est.value.to_f64())
            .map_err(num_err)
    }

    /// k-th smallest root modulus within `e^{+-tau}`, as a float.
    #[pyo3(signature = (k, tau = 0.001))]
    fn root_modulus_k(&self, k: usize, tau: f64) -> PyResult<f64> {
        mod_k(&self.poly, k, tau, &Limits::default())
            .map(|est| est.value.to_f64())
            .map_err(num_err)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial(degree={}, bits={})", self.poly.degree(), self.bits)
    }
}

fn any_to_float(prec: Precision, value: &Bound<'_, PyAny>) -> PyResult<rug::Float> {
    if let Ok(s) = value.extract::<String>() {
        return float_from_decimal(prec, &s)
            .ok_or_else(|| PyValueError::new_err(format!("bad decimal `{s}`")));
    }
    let x = value.extract::<f64>()?;
    Ok(rug::Float::with_val(prec.bits(), x))
}

#[pymodule]
fn circlesplit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Polynomial>()?;
    Ok(())
}
