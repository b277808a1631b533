use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::netgen::Network;

/// Numeric node table read from a CSV file with a header row.
#[derive(Debug, Clone)]
pub struct NodeTable {
    pub columns: Vec<String>,
    /// Column-major values, one vector per entry of `columns`.
    pub values: Vec<Vec<f64>>,
    /// Row index of each id, when an id column was named.
    pub ids: Option<HashMap<String, usize>>,
}

impl NodeTable {
    pub fn n(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|k| self.values[k].as_slice())
            .ok_or_else(|| Error::Input(format!("column {name:?} not found; available: {}", self.columns.join(","))))
    }

    /// Reads the table. Every column except `id_col` must parse as a number.
    pub fn load(path: impl AsRef<Path>, id_col: Option<&str>) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
            .iter()
            .map(str::to_string)
            .collect();
        let id_pos = match id_col {
            Some(name) => Some(
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::Input(format!("id column {name:?} not in header")))?,
            ),
            None => None,
        };
        let columns: Vec<String> = header.iter().enumerate().filter(|(k, _)| Some(*k) != id_pos).map(|(_, h)| h.clone()).collect();
        let mut values = vec![Vec::new(); columns.len()];
        let mut ids = id_pos.map(|_| HashMap::new());
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            let mut c = 0;
            for (k, field) in rec.iter().enumerate() {
                if Some(k) == id_pos {
                    if let Some(map) = ids.as_mut() {
                        if map.insert(field.to_string(), row).is_some() {
                            return Err(Error::Input(format!("duplicate id {field:?} on data row {}", row + 1)));
                        }
                    }
                    continue;
                }
                let v: f64 = field.parse().map_err(|_| {
                    Error::Parse(format!("data row {}, column {:?}: {field:?} is not a number", row + 1, header[k]))
                })?;
                values[c].push(v);
                c += 1;
            }
        }
        Ok(Self { columns, values, ids })
    }

    /// Loads an edge list whose entries are row indices, or ids when the table has an id column.
    pub fn load_edges(&self, path: impl AsRef<Path>) -> Result<Network> {
        let path = path.as_ref();
        let Some(ids) = &self.ids else {
            return Network::load_edge_list(path, Some(self.n()));
        };
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut edges = Vec::new();
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected two node ids", lineno + 1)));
            }
            let look = |s: &str| {
                ids.get(s)
                    .copied()
                    .ok_or_else(|| Error::Referential(format!("line {}: unknown node id {s:?}", lineno + 1)))
            };
            edges.push((look(parts[0])?, look(parts[1])?));
        }
        Network::from_edges(self.n(), edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
        p
    }

    #[test]
    fn ids_map_edges_to_rows() {
        let dir = tempfile::tempdir().unwrap();
        let nodes = write(&dir, "n.csv", "id,y,t\nb,1,0\na,2,1\nc,3,1\n");
        let edges = write(&dir, "e.txt", "a b\n# comment\nc a\n");
        let t = NodeTable::load(&nodes, Some("id")).unwrap();
        assert_eq!(t.columns, vec!["y", "t"]);
        let net = t.load_edges(&edges).unwrap();
        assert!(net.has_edge(0, 1) && net.has_edge(1, 2) && !net.has_edge(0, 2));
        let bad = write(&dir, "bad.txt", "a z\n");
        assert!(matches!(t.load_edges(&bad), Err(Error::Referential(_))));
    }

    #[test]
    fn non_numeric_field_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let nodes = write(&dir, "n.csv", "y,t\n1,x\n");
        assert!(matches!(NodeTable::load(&nodes, None), Err(Error::Parse(_))));
    }
}
