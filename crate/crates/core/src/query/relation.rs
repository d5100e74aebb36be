use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub type Tuple = Vec<String>;

/// A set of tuples over named attributes (query variables).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub attrs: Vec<String>,
    pub tuples: BTreeSet<Tuple>,
}

impl Relation {
    pub fn new(attrs: Vec<String>) -> Self {
        Relation {
            attrs,
            tuples: BTreeSet::new(),
        }
    }

    /// The relation over no attributes holding the empty tuple.
    pub fn unit() -> Self {
        let mut r = Relation::new(Vec::new());
        r.tuples.insert(Vec::new());
        r
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    fn positions(&self, attrs: &[String]) -> Vec<usize> {
        attrs
            .iter()
            .map(|a| {
                self.attrs
                    .iter()
                    .position(|b| b == a)
                    .unwrap_or_else(|| panic!("attribute {a} not in relation"))
            })
            .collect()
    }

    fn shared(&self, other: &Relation) -> Vec<String> {
        self.attrs
            .iter()
            .filter(|a| other.attrs.contains(a))
            .cloned()
            .collect()
    }

    /// Projection onto `attrs`, in that order. Every attribute must exist.
    pub fn project(&self, attrs: &[String]) -> Relation {
        let pos = self.positions(attrs);
        Relation {
            attrs: attrs.to_vec(),
            tuples: self
                .tuples
                .iter()
                .map(|t| pos.iter().map(|&i| t[i].clone()).collect())
                .collect(),
        }
    }

    /// Natural join by hashing on the shared attributes. The result lists
    /// this relation's attributes, then the other's new ones.
    pub fn join(&self, other: &Relation) -> Relation {
        let shared = self.shared(other);
        let lp = self.positions(&shared);
        let rp = other.positions(&shared);
        let extra: Vec<usize> = (0..other.attrs.len())
            .filter(|i| !shared.contains(&other.attrs[*i]))
            .collect();
        let mut index: HashMap<Vec<&str>, Vec<&Tuple>> = HashMap::new();
        for t in &other.tuples {
            index
                .entry(rp.iter().map(|&i| t[i].as_str()).collect())
                .or_default()
                .push(t);
        }
        let mut attrs = self.attrs.clone();
        attrs.extend(extra.iter().map(|&i| other.attrs[i].clone()));
        let mut out = Relation::new(attrs);
        for t in &self.tuples {
            let key: Vec<&str> = lp.iter().map(|&i| t[i].as_str()).collect();
            if let Some(ms) = index.get(&key) {
                for m in ms {
                    let mut row = t.clone();
                    row.extend(extra.iter().map(|&i| m[i].clone()));
                    out.tuples.insert(row);
                }
            }
        }
        out
    }

    /// Tuples of this relation that agree with some tuple of `other` on the
    /// shared attributes.
    pub fn semijoin(&self, other: &Relation) -> Relation {
        let shared = self.shared(other);
        let keys: BTreeSet<Tuple> = other.project(&shared).tuples;
        let lp = self.positions(&shared);
        Relation {
            attrs: self.attrs.clone(),
            tuples: self
                .tuples
                .iter()
                .filter(|t| keys.contains(&lp.iter().map(|&i| t[i].clone()).collect::<Tuple>()))
                .cloned()
                .collect(),
        }
    }

    /// CSV rows without a header; an attribute-less relation prints one empty
    /// line when it holds the empty tuple.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for t in &self.tuples {
            if t.is_empty() {
                w.write_record([""]).expect("in-memory write");
            } else {
                w.write_record(t).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8 input")
    }
}

/// A stored relation: positional columns, no attribute names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    /// `None` for a relation loaded from an empty file.
    pub arity: Option<usize>,
    pub tuples: BTreeSet<Tuple>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Database {
    pub relations: BTreeMap<String, Table>,
}

impl Database {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, tuples: impl IntoIterator<Item = Tuple>) -> Result<()> {
        let table = self.relations.entry(name.to_string()).or_default();
        for t in tuples {
            match table.arity {
                Some(a) if a != t.len() => {
                    return Err(Error::Arity {
                        relation: name.to_string(),
                        expected: a,
                        found: t.len(),
                    })
                }
                _ => table.arity = Some(t.len()),
            }
            table.tuples.insert(t);
        }
        Ok(())
    }

    pub fn table(&self, name: &str) -> Result<&Table> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    /// Loads every `<relation>.csv` in `dir` (UTF-8, no header).
    pub fn load_dir(dir: &Path) -> Result<Database> {
        let io = |e| Error::Io {
            path: dir.display().to_string(),
            source: e,
        };
        let mut files: Vec<_> = fs::read_dir(dir)
            .map_err(io)?
            .collect::<std::io::Result<Vec<_>>>()
            .map_err(io)?
            .into_iter()
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "csv"))
            .collect();
        files.sort();
        let mut db = Database::new();
        for path in files {
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_string();
            let csv_err = |e| Error::Csv {
                path: path.display().to_string(),
                source: e,
            };
            let mut rd = csv::ReaderBuilder::new()
                .has_headers(false)
                .from_path(&path)
                .map_err(csv_err)?;
            let mut rows = Vec::new();
            for rec in rd.records() {
                let rec = rec.map_err(csv_err)?;
                rows.push(rec.iter().map(str::to_string).collect::<Tuple>());
            }
            db.relations.entry(name.clone()).or_default();
            db.insert(&name, rows)?;
        }
        Ok(db)
    }

    /// Writes one `<relation>.csv` per relation into `dir`.
    pub fn save_dir(&self, dir: &Path) -> Result<()> {
        let io = |path: &Path, e| Error::Io {
            path: path.display().to_string(),
            source: e,
        };
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        for (name, t) in &self.relations {
            let path = dir.join(format!("{name}.csv"));
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            for row in &t.tuples {
                w.write_record(row).map_err(|e| Error::Csv {
                    path: path.display().to_string(),
                    source: e,
                })?;
            }
            let bytes = w.into_inner().expect("in-memory write");
            fs::write(&path, bytes).map_err(|e| io(&path, e))?;
        }
        Ok(())
    }
}
