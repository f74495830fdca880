//! Key=value run configuration: file values overlaid by command-line flags,
//! then validated in one pass that reports every violation at once.

use std::collections::BTreeMap;

use starcover::cfrac::{Real, Surd};

/// A slope or step given exactly (named constant, surd) or as a float.
#[derive(Clone, Debug)]
pub struct RealValue {
    /// Canonical text form; echoed into the output metadata.
    pub text: String,
    pub real: Real,
}

impl RealValue {
    pub fn value(&self) -> f64 {
        self.real.value()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.real, Real::Surd(_))
    }

    pub fn parse(text: &str) -> Result<RealValue, String> {
        let t = text.trim();
        let real = match t {
            "golden" => Real::Surd(Surd::golden()),
            "sqrt2" => Real::Surd(Surd::sqrt2()),
            _ if t.starts_with("surd:") => {
                let parts: Vec<&str> = t["surd:".len()..].split(',').collect();
                if parts.len() != 3 && parts.len() != 4 {
                    return Err("surd form is surd:a,b,d[,c]".into());
                }
                let mut nums = Vec::with_capacity(4);
                for p in &parts {
                    nums.push(
                        p.trim()
                            .parse::<i64>()
                            .map_err(|_| format!("surd component '{p}' is not an integer"))?,
                    );
                }
                let c = if nums.len() == 4 { nums[3] } else { 1 };
                Real::Surd(
                    Surd::new(nums[0], nums[1], nums[2], c).map_err(|e| e.to_string())?,
                )
            }
            _ => {
                let v: f64 = t.parse().map_err(|_| format!("'{t}' is not a number"))?;
                if !v.is_finite() {
                    return Err("value must be finite".into());
                }
                Real::Float(v)
            }
        };
        Ok(RealValue { text: t.to_string(), real })
    }
}

/// Flat key -> value store; later inserts win.
#[derive(Clone, Debug, Default)]
pub struct ConfigMap {
    pub entries: BTreeMap<String, String>,
}

impl ConfigMap {
    /// Parse the documented key=value file format. Blank lines and lines
    /// starting with '#' are skipped.
    pub fn parse_file(text: &str) -> Result<ConfigMap, Vec<String>> {
        let mut map = ConfigMap::default();
        let mut errs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) => {
                    map.entries.insert(k.trim().to_string(), v.trim().to_string());
                }
                None => errs.push(format!("line {}: expected key=value, got '{line}'", i + 1)),
            }
        }
        if errs.is_empty() {
            Ok(map)
        } else {
            Err(errs)
        }
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.entries.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

/// Typed accessors over a [`ConfigMap`] that accumulate violations instead
/// of stopping at the first one.
pub struct Scope<'a> {
    map: &'a ConfigMap,
    used: Vec<&'static str>,
    pub violations: Vec<String>,
}

impl<'a> Scope<'a> {
    pub fn new(map: &'a ConfigMap) -> Self {
        Scope { map, used: Vec::new(), violations: Vec::new() }
    }

    fn fail<T>(&mut self, key: &str, msg: &str, fallback: T) -> T {
        self.violations.push(format!("{key}: {msg}"));
        fallback
    }

    fn raw(&mut self, key: &'static str) -> Option<&'a str> {
        self.used.push(key);
        self.map.get(key)
    }

    pub fn req_real(&mut self, key: &'static str) -> RealValue {
        let fallback = RealValue { text: "1".into(), real: Real::Float(1.0) };
        match self.raw(key) {
            None => self.fail(key, "missing required field", fallback),
            Some(v) => match RealValue::parse(v) {
                Ok(r) => r,
                Err(e) => self.fail(key, &e, fallback),
            },
        }
    }

    pub fn opt_real(&mut self, key: &'static str, default: &str) -> RealValue {
        let text = self.raw(key).unwrap_or(default).to_string();
        match RealValue::parse(&text) {
            Ok(r) => r,
            Err(e) => self.fail(key, &e, RealValue { text: "1".into(), real: Real::Float(1.0) }),
        }
    }

    fn parse_num<T: std::str::FromStr>(&mut self, key: &'static str, text: &str, fallback: T) -> T {
        match text.parse::<T>() {
            Ok(v) => v,
            Err(_) => self.fail(key, &format!("'{text}' has the wrong type"), fallback),
        }
    }

    pub fn req_f64(&mut self, key: &'static str) -> f64 {
        match self.raw(key) {
            None => self.fail(key, "missing required field", 1.0),
            Some(v) => {
                let v = v.to_string();
                self.parse_num(key, &v, 1.0)
            }
        }
    }

    pub fn opt_f64(&mut self, key: &'static str, default: f64) -> f64 {
        match self.raw(key) {
            None => default,
            Some(v) => {
                let v = v.to_string();
                self.parse_num(key, &v, default)
            }
        }
    }

    pub fn req_u32(&mut self, key: &'static str) -> u32 {
        match self.raw(key) {
            None => self.fail(key, "missing required field", 1),
            Some(v) => {
                let v = v.to_string();
                self.parse_num(key, &v, 1)
            }
        }
    }

    pub fn req_usize(&mut self, key: &'static str) -> usize {
        match self.raw(key) {
            None => self.fail(key, "missing required field", 1),
            Some(v) => {
                let v = v.to_string();
                self.parse_num(key, &v, 1)
            }
        }
    }

    pub fn opt_usize(&mut self, key: &'static str, default: usize) -> usize {
        match self.raw(key) {
            None => default,
            Some(v) => {
                let v = v.to_string();
                self.parse_num(key, &v, default)
            }
        }
    }

    pub fn opt_string(&mut self, key: &'static str, default: &str) -> String {
        self.raw(key).unwrap_or(default).to_string()
    }

    pub fn opt_usize_list(&mut self, key: &'static str, default: &str) -> Vec<usize> {
        let text = self.raw(key).unwrap_or(default).to_string();
        self.num_list(key, &text)
    }

    pub fn opt_i64_list(&mut self, key: &'static str, default: &str) -> Vec<i64> {
        let text = self.raw(key).unwrap_or(default).to_string();
        self.num_list(key, &text)
    }

    pub fn req_i64_list(&mut self, key: &'static str) -> Vec<i64> {
        match self.raw(key) {
            None => self.fail(key, "missing required field", vec![1]),
            Some(v) => {
                let v = v.to_string();
                self.num_list(key, &v)
            }
        }
    }

    fn num_list<T: std::str::FromStr + Clone>(&mut self, key: &'static str, text: &str) -> Vec<T> {
        let mut out = Vec::new();
        for part in text.split(',') {
            match part.trim().parse::<T>() {
                Ok(v) => out.push(v),
                Err(_) => {
                    return self.fail(key, &format!("'{part}' is not a valid list entry"), out)
                }
            }
        }
        if out.is_empty() {
            return self.fail(key, "list must not be empty", out);
        }
        out
    }

    pub fn check(&mut self, ok: bool, key: &str, msg: &str) {
        if !ok {
            self.violations.push(format!("{key}: {msg}"));
        }
    }
}
