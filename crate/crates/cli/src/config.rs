//! Config file loading, flag overlay and the value syntaxes accepted in both.

use std::fmt;
use std::path::Path;

use pphull::geometry::Disk;
use pphull::model::{FunctionModel, SeqSpec};
use pphull::poly::Polynomial;
use pphull::Complex64;
use serde::de::{self, DeserializeOwned, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::CliError;

pub const COMMANDS: [&str; 7] = ["decompose", "fekete", "approx", "psh", "thin", "hmeasure", "hull"];
const COMMON_KEYS: [&str; 4] = ["seed", "threads", "tolerance", "out"];

/// Flags shared by every subcommand.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Common {
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

/// A parsed run: common settings plus the command's own table, with flags
/// already laid over the file values.
pub struct Resolved {
    pub common: Common,
    pub section: toml::Table,
}

fn schema(msg: impl fmt::Display) -> CliError {
    CliError::Schema(msg.to_string())
}

pub fn read_file(path: &Path) -> Result<toml::Table, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| schema(format!("cannot read config {}: {e}", path.display())))?;
    text.parse::<toml::Table>().map_err(|e| schema(format!("config {}: {e}", path.display())))
}

/// Overlays `flags` (section keys, with `function` and `n_max` routed into the
/// function table) and `common_flags` on the file contents.
pub fn resolve(file: Option<toml::Table>, command: &str, common_flags: toml::Table, flags: toml::Table) -> Result<Resolved, CliError> {
    let file = file.unwrap_or_default();
    let mut common = toml::Table::new();
    let mut function = toml::Table::new();
    let mut section = toml::Table::new();
    for (key, value) in file {
        match key.as_str() {
            k if COMMON_KEYS.contains(&k) => {
                common.insert(key, value);
            }
            "command" => {
                if value.as_str() != Some(command) {
                    return Err(schema(format!("config is for command {value}, not {command}")));
                }
            }
            "function" => function = into_table(value, "function")?,
            k if COMMANDS.contains(&k) => {
                if k == command {
                    section = into_table(value, k)?;
                }
            }
            _ => return Err(schema(format!("unknown top-level config key `{key}`"))),
        }
    }
    if let Some(v) = section.remove("function") {
        function.extend(into_table(v, "function")?);
    }
    for (key, value) in common_flags {
        common.insert(key, value);
    }
    for (key, value) in flags {
        match key.as_str() {
            "function" => {
                if function.get("preset") != Some(&value) {
                    function.clear();
                }
                function.insert("preset".into(), value);
            }
            "n_max" => {
                function.insert(key, value);
            }
            _ => {
                section.insert(key, value);
            }
        }
    }
    if !function.is_empty() {
        section.insert("function".into(), toml::Value::Table(function));
    }
    let common: Common = toml::Value::Table(common).try_into().map_err(|e| schema(format!("common settings: {e}")))?;
    Ok(Resolved { common, section })
}

fn into_table(value: toml::Value, name: &str) -> Result<toml::Table, CliError> {
    match value {
        toml::Value::Table(t) => Ok(t),
        _ => Err(schema(format!("`{name}` must be a table"))),
    }
}

pub fn typed<P: DeserializeOwned>(section: toml::Table, command: &str) -> Result<P, CliError> {
    toml::Value::Table(section).try_into().map_err(|e| schema(format!("[{command}] {e}")))
}

fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    // `e`, `e2`, `e10` are powers of e
    if let Some(rest) = t.strip_prefix('e') {
        let k: f64 = if rest.is_empty() { 1.0 } else { rest.parse().map_err(|_| format!("bad number `{s}`"))? };
        return Ok(k.exp());
    }
    Err(format!("bad number `{s}`"))
}

fn parse_list(s: &str, n: usize, what: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<f64> = s.split(',').map(parse_real).collect::<Result<_, _>>()?;
    if parts.len() != n {
        return Err(format!("{what} needs {n} comma-separated numbers, got `{s}`"));
    }
    Ok(parts)
}

/// Real number; also accepts the tokens `e`, `e2`, `e10`, ... for powers of e.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real(pub f64);

/// Complex number written `re` or `re,im`, or as a two-element array.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cplx(pub Complex64);

/// Disk written `x,y,r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskArg(pub Disk<f64>);

/// Pair of reals written `a,b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pair(pub f64, pub f64);

/// Schedule item written `m:N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sched(pub usize, pub usize);

/// Accepts a number, a string or an array of numbers and hands them to `parse`.
struct Flex<F>(&'static str, F);

impl<'de, T, F: FnOnce(Vec<f64>, Option<&str>) -> Result<T, String>> Visitor<'de> for Flex<F> {
    type Value = T;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.0)
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<T, E> {
        (self.1)(vec![v], None).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<T, E> {
        self.visit_f64(v as f64)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<T, E> {
        self.visit_f64(v as f64)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<T, E> {
        (self.1)(Vec::new(), Some(v)).map_err(E::custom)
    }

    fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> Result<T, A::Error> {
        let mut out = Vec::new();
        while let Some(x) = seq.next_element::<f64>()? {
            out.push(x);
        }
        (self.1)(out, None).map_err(de::Error::custom)
    }
}

fn numbers(nums: Vec<f64>, text: Option<&str>, n: usize, what: &str) -> Result<Vec<f64>, String> {
    match text {
        Some(s) => parse_list(s, n, what),
        None if nums.len() == n => Ok(nums),
        None => Err(format!("{what} needs {n} numbers")),
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(Flex("a real number", |v: Vec<f64>, s: Option<&str>| match s {
            Some(s) => parse_real(s).map(Real),
            None => numbers(v, None, 1, "a real").map(|v| Real(v[0])),
        }))
    }
}

impl<'de> Deserialize<'de> for Cplx {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(Flex("a complex number `re` or `re,im`", |v: Vec<f64>, s: Option<&str>| {
            let parts = match s {
                Some(s) => s.split(',').map(parse_real).collect::<Result<Vec<_>, _>>()?,
                None => v,
            };
            match parts[..] {
                [re] => Ok(Cplx(Complex64::new(re, 0.0))),
                [re, im] => Ok(Cplx(Complex64::new(re, im))),
                _ => Err("a complex number has one or two parts".into()),
            }
        }))
    }
}

impl<'de> Deserialize<'de> for DiskArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(Flex("a disk `x,y,r`", |v: Vec<f64>, s: Option<&str>| {
            let p = numbers(v, s, 3, "a disk")?;
            Disk::new(Complex64::new(p[0], p[1]), p[2]).map(DiskArg).map_err(|e| e.to_string())
        }))
    }
}

impl<'de> Deserialize<'de> for Pair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(Flex("a pair `a,b`", |v: Vec<f64>, s: Option<&str>| {
            let p = numbers(v, s, 2, "a pair")?;
            Ok(Pair(p[0], p[1]))
        }))
    }
}

impl<'de> Deserialize<'de> for Sched {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(Flex("a schedule item `m:N`", |v: Vec<f64>, s: Option<&str>| {
            let p = match s {
                Some(s) => {
                    let (m, n) = s.split_once(':').ok_or_else(|| format!("schedule item `{s}` is not `m:N`"))?;
                    let int = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad schedule item `{s}`"));
                    return Ok(Sched(int(m)?, int(n)?));
                }
                None => numbers(v, None, 2, "a schedule item")?,
            };
            if p.iter().any(|x| x.fract() != 0.0 || *x < 0.0) {
                return Err("schedule entries must be non-negative integers".into());
            }
            Ok(Sched(p[0] as usize, p[1] as usize))
        }))
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl Serialize for DiskArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.center.re, self.0.center.im, self.0.radius].serialize(s)
    }
}

impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(s)
    }
}

impl Serialize for Sched {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(s)
    }
}

/// Named function family with its parameter overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    pub preset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Coefficient ratio of `geometric-poles`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    /// Pole of `single-pole`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pole: Option<Cplx>,
    /// Centers and coefficients of `pole-series`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub centers: Option<Vec<Cplx>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<Cplx>>,
    /// Ascending numerator coefficients and denominator roots of `rational`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numerator: Option<Vec<Cplx>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub denominator_roots: Option<Vec<Cplx>>,
}

pub const PRESETS: [&str; 9] = [
    "exp-reciprocal",
    "recip-sin-pi",
    "gaussian-poles",
    "geometric-poles",
    "pole-series",
    "rational",
    "single-pole",
    "two-pole",
    "laurent-example",
];

const DEFAULT_TERMS: usize = 40;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl FunctionSpec {
    pub fn model(&self) -> Result<FunctionModel, CliError> {
        let name = self.preset.replace('_', "-");
        let used = |fields: &[&str]| -> Result<(), CliError> {
            let given = [
                ("n_max", self.n_max.is_some()),
                ("ratio", self.ratio.is_some()),
                ("pole", self.pole.is_some()),
                ("centers", self.centers.is_some()),
                ("coeffs", self.coeffs.is_some()),
                ("numerator", self.numerator.is_some()),
                ("denominator_roots", self.denominator_roots.is_some()),
            ];
            match given.iter().find(|(k, set)| *set && !fields.contains(k)) {
                Some((k, _)) => Err(schema(format!("function preset `{name}` takes no parameter `{k}`"))),
                None => Ok(()),
            }
        };
        let cplx = |v: &Option<Vec<Cplx>>, what: &str| -> Result<Vec<Complex64>, CliError> {
            v.as_ref().map(|v| v.iter().map(|x| x.0).collect()).ok_or_else(|| schema(format!("function preset `{name}` needs `{what}`")))
        };
        let model = match name.as_str() {
            "exp-reciprocal" => {
                used(&[])?;
                FunctionModel::ExpReciprocal
            }
            "recip-sin-pi" => {
                used(&[])?;
                FunctionModel::RecipSinPi
            }
            "gaussian-poles" => {
                used(&["n_max"])?;
                FunctionModel::gaussian_poles(self.n_max.unwrap_or(DEFAULT_TERMS))
            }
            "geometric-poles" => {
                used(&["n_max", "ratio"])?;
                FunctionModel::PoleSeries {
                    centers: SeqSpec::Reciprocal,
                    coeffs: SeqSpec::Geometric { ratio: self.ratio.unwrap_or(0.5) },
                    n_max: self.n_max.unwrap_or(DEFAULT_TERMS),
                }
            }
            "pole-series" => {
                used(&["centers", "coeffs"])?;
                let centers = cplx(&self.centers, "centers")?;
                let coeffs = cplx(&self.coeffs, "coeffs")?;
                if centers.len() != coeffs.len() {
                    return Err(schema("pole-series needs as many coeffs as centers"));
                }
                FunctionModel::PoleSeries {
                    n_max: centers.len(),
                    centers: SeqSpec::Explicit { values: centers },
                    coeffs: SeqSpec::Explicit { values: coeffs },
                }
            }
            "rational" => {
                used(&["numerator", "denominator_roots"])?;
                FunctionModel::Rational {
                    p: Polynomial::from_coeffs(cplx(&self.numerator, "numerator")?),
                    q: Polynomial::from_roots(&cplx(&self.denominator_roots, "denominator_roots")?),
                }
            }
            "single-pole" => {
                used(&["pole"])?;
                let a = self.pole.map_or(Complex64::new(0.1, 0.2), |p| p.0);
                FunctionModel::Rational { p: Polynomial::constant(c(1.0)), q: Polynomial::from_roots(&[a]) }
            }
            "two-pole" => {
                used(&[])?;
                // 1/(z - 0.3) + 2/(z - 0.5)
                FunctionModel::Rational { p: Polynomial::from_coeffs(vec![c(-1.1), c(3.0)]), q: Polynomial::from_roots(&[c(0.3), c(0.5)]) }
            }
            "laurent-example" => {
                used(&[])?;
                // z^2 + 3/(z - 0.2)
                FunctionModel::Rational {
                    p: Polynomial::from_coeffs(vec![c(3.0), c(0.0), c(-0.2), c(1.0)]),
                    q: Polynomial::from_roots(&[c(0.2)]),
                }
            }
            _ => return Err(schema(format!("unknown function preset `{}`; known: {}", self.preset, PRESETS.join(", ")))),
        };
        model.validate().map_err(|e| schema(format!("function: {e}")))?;
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Deserialize)]
    struct Probe {
        r: Vec<Real>,
        z: Cplx,
        d: DiskArg,
        s: Vec<Sched>,
    }

    fn parse(text: &str) -> Result<Probe, toml::de::Error> {
        toml::from_str(text)
    }

    #[test]
    fn value_syntaxes() {
        let p = parse("r = [\"e\", \"e2\", 3]\nz = \"0.5,-1\"\nd = [0, 0, 0.5]\ns = [\"2:3\", [1, 4]]").unwrap();
        assert_eq!(p.r[0].0, std::f64::consts::E);
        assert!((p.r[1].0 - 2f64.exp()).abs() < 1e-15);
        assert_eq!(p.r[2].0, 3.0);
        assert_eq!(p.z.0, Complex64::new(0.5, -1.0));
        assert_eq!(p.d.0.radius, 0.5);
        assert_eq!((p.s[0].0, p.s[0].1, p.s[1].0, p.s[1].1), (2, 3, 1, 4));
        let q = parse("r = []\nz = 0.25\nd = \"1,2,3\"\ns = []").unwrap();
        assert_eq!(q.z.0, Complex64::new(0.25, 0.0));
        assert_eq!(q.d.0.center, Complex64::new(1.0, 2.0));
        assert!(parse("r = [\"x\"]\nz = 0\nd = \"1,2,3\"\ns = []").is_err());
        assert!(parse("r = []\nz = 0\nd = \"1,2,-3\"\ns = []").is_err());
        assert!(parse("r = []\nz = 0\nd = \"1,2,3\"\ns = [\"2-3\"]").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file: toml::Table = "seed = 3\n[function]\npreset = \"gaussian-poles\"\nn_max = 12\n[hull]\ndepth = 20\n".parse().unwrap();
        let flags: toml::Table = "depth = 30\nn_max = 15\n".parse().unwrap();
        let common: toml::Table = "seed = 9\n".parse().unwrap();
        let r = resolve(Some(file.clone()), "hull", common, flags).unwrap();
        assert_eq!(r.common.seed, 9);
        assert_eq!(r.section["depth"].as_integer(), Some(30));
        let f: FunctionSpec = r.section["function"].clone().try_into().unwrap();
        assert_eq!((f.preset.as_str(), f.n_max), ("gaussian-poles", Some(15)));
        // a different preset on the command line drops the file's parameters
        let r = resolve(Some(file), "hull", toml::Table::new(), "function = \"exp-reciprocal\"".parse().unwrap()).unwrap();
        let f: FunctionSpec = r.section["function"].clone().try_into().unwrap();
        assert_eq!(f.n_max, None);
        f.model().unwrap();
    }

    #[test]
    fn bad_configs_are_schema_errors() {
        let bad: toml::Table = "colour = 1".parse().unwrap();
        assert!(matches!(resolve(Some(bad), "hull", toml::Table::new(), toml::Table::new()), Err(CliError::Schema(_))));
        let wrong: toml::Table = "command = \"thin\"".parse().unwrap();
        assert!(resolve(Some(wrong), "hull", toml::Table::new(), toml::Table::new()).is_err());
        let spec = FunctionSpec { preset: "exp-reciprocal".into(), n_max: Some(3), ..serde_default() };
        assert!(spec.model().is_err());
        assert!(FunctionSpec { preset: "nope".into(), ..serde_default() }.model().is_err());
    }

    #[test]
    fn presets_evaluate() {
        let eval = |name: &str, z: Complex64| FunctionSpec { preset: name.into(), ..serde_default() }.model().unwrap().evaluator::<f64>().at(z);
        let z = Complex64::new(0.7, 0.1);
        assert!((eval("two-pole", z) - (1.0 / (z - 0.3) + 2.0 / (z - 0.5))).norm() < 1e-12);
        assert!((eval("laurent-example", z) - (z * z + 3.0 / (z - 0.2))).norm() < 1e-12);
        assert!((eval("single-pole", z) - 1.0 / (z - Complex64::new(0.1, 0.2))).norm() < 1e-12);
        for name in PRESETS.iter().filter(|p| !["pole-series", "rational"].contains(p)) {
            assert!(eval(name, z).norm().is_finite(), "{name}");
        }
    }

    fn serde_default() -> FunctionSpec {
        FunctionSpec {
            preset: String::new(),
            n_max: None,
            ratio: None,
            pole: None,
            centers: None,
            coeffs: None,
            numerator: None,
            denominator_roots: None,
        }
    }
}
