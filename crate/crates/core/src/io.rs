//! Class files: JSON objects with `m_bound`, `values`, and optionally
//! `labels`, `c_categories` and `components` for product classes.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_class::{margin_class, LabeledDataset, ProductScorerClass, TabulatedClass};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassFile {
    pub m_bound: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<Vec<f64>>,
    /// 1-based category of each point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_categories: Option<usize>,
    /// One value table per category.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Vec<Vec<f64>>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedClass {
    Tabulated(TabulatedClass),
    Product {
        class: ProductScorerClass,
        data: Option<LabeledDataset>,
    },
}

impl LoadedClass {
    /// The class itself, or the margin class of a labeled product class.
    pub fn margins(&self) -> Result<TabulatedClass> {
        match self {
            LoadedClass::Tabulated(f) => Ok(f.clone()),
            LoadedClass::Product { class, data: Some(d) } => margin_class(class, d),
            LoadedClass::Product { data: None, .. } => Err(Error::Format(
                "a product class needs `labels` to define its margin class".into(),
            )),
        }
    }
}

impl ClassFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("class files serialize")
    }

    pub fn from_tabulated(f: &TabulatedClass) -> Self {
        Self {
            m_bound: f.m_bound(),
            values: f.to_rows(),
            labels: None,
            c_categories: None,
            components: None,
        }
    }

    pub fn from_product(g: &ProductScorerClass, labels: Option<Vec<usize>>) -> Self {
        Self {
            m_bound: g.m_bound(),
            values: Vec::new(),
            labels,
            c_categories: Some(g.c_categories()),
            components: Some(g.components().iter().map(TabulatedClass::to_rows).collect()),
        }
    }

    pub fn load(&self) -> Result<LoadedClass> {
        let data = self.labels.clone().map(LabeledDataset::sequential).transpose()?;
        match &self.components {
            Some(comps) => {
                if !self.values.is_empty() {
                    return Err(Error::Format("give either `values` or `components`, not both".into()));
                }
                if let Some(c) = self.c_categories {
                    if c != comps.len() {
                        return Err(Error::Format(format!(
                            "c_categories = {c} but {} components",
                            comps.len()
                        )));
                    }
                }
                let parts = comps
                    .iter()
                    .map(|rows| TabulatedClass::new(rows.clone(), self.m_bound))
                    .collect::<Result<Vec<_>>>()?;
                Ok(LoadedClass::Product {
                    class: ProductScorerClass::new(parts)?,
                    data,
                })
            }
            None => {
                if self.values.is_empty() {
                    return Err(Error::Format("missing `values`".into()));
                }
                Ok(LoadedClass::Tabulated(TabulatedClass::new(self.values.clone(), self.m_bound)?))
            }
        }
    }
}

/// Reads and validates a class file.
pub fn load_class_file(path: &Path) -> Result<LoadedClass> {
    ClassFile::read(path)?.load()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_round_trip() {
        let f = TabulatedClass::new(vec![vec![0.5, -1.0], vec![0.0, 1.0]], 1.0).unwrap();
        let text = ClassFile::from_tabulated(&f).to_json();
        let back = ClassFile::from_json(&text).unwrap().load().unwrap();
        assert_eq!(back, LoadedClass::Tabulated(f.clone()));
        assert_eq!(back.margins().unwrap(), f);
    }

    #[test]
    fn values_parse_exactly() {
        let rows = vec![vec![0.1 + 0.2, 2024.3859716078641 / 4096.0, -1.0 / 3.0, f64::MIN_POSITIVE]];
        let f = TabulatedClass::new(rows.clone(), 1.0).unwrap();
        let back = ClassFile::from_json(&ClassFile::from_tabulated(&f).to_json()).unwrap();
        assert_eq!(back.values, rows);
    }

    #[test]
    fn product_with_labels() {
        let text = r#"{"m_bound": 1, "labels": [2], "c_categories": 3,
            "components": [[[1.0]], [[-1.0]], [[0.0]]]}"#;
        let loaded = ClassFile::from_json(text).unwrap().load().unwrap();
        let f = loaded.margins().unwrap();
        assert_eq!(f.value(0, 0), -1.0);
    }

    #[test]
    fn malformed_files() {
        assert!(ClassFile::from_json(r#"{"values": [[0.0]]}"#).is_err());
        assert!(ClassFile::from_json(r#"{"m_bound": 1, "values": [[0.0]], "extra": 1}"#).is_err());
        assert!(ClassFile::from_json(r#"{"m_bound": 1}"#).unwrap().load().is_err());
        let mismatch = r#"{"m_bound": 1, "c_categories": 4, "components": [[[1.0]], [[-1.0]], [[0.0]]]}"#;
        assert!(ClassFile::from_json(mismatch).unwrap().load().is_err());
        let unlabeled = r#"{"m_bound": 1, "components": [[[1.0]], [[-1.0]], [[0.0]]]}"#;
        assert!(ClassFile::from_json(unlabeled).unwrap().load().unwrap().margins().is_err());
        assert!(ClassFile::from_json(r#"{"m_bound": 1, "values": [[2.0]]}"#).unwrap().load().is_err());
    }
}
