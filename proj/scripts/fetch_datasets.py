#!/usr/bin/env python3
"""Fetch the benchmark datasets referenced by the descriptors in descriptors/.

Files are downloaded into the data root (data/ by default, overridable with
--data-root or BANDGRID_DATA_ROOT), validated structurally (row and field
counts, optional sha256 from the descriptor), and only then kept. Existing
files are left alone unless --force is given.

BANDGRID_FETCH_BASE replaces the canonical download host, for mirrors.

The user_modelling source is published as an .xls workbook with separate
training and test sheets. When pandas and xlrd are importable the workbook is
converted to the two headerless CSV files its descriptor expects; otherwise
the workbook is saved and manual conversion instructions are printed.
"""

import argparse
import hashlib
import json
import os
import sys
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path

CANONICAL_BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases"

USER_MODELLING_XLS = "00257/Data_User_Modeling_Dataset_Hamdi%20Tolga%20KAHRAMAN.xls"

# Normalization for the inconsistent class strings in the user_modelling
# workbook ("very_low" in one sheet, "Very Low" in the other).
USER_MODELLING_LABELS = {
    "very_low": "very_low",
    "low": "Low",
    "middle": "Middle",
    "high": "High",
}


@dataclass
class RemoteFile:
    dataset: str
    file_key: str  # "all" | "train" | "test", matches the descriptor
    filename: str
    path: str  # below the download base
    rows: int
    fields: int
    delimiter: str = ","


REMOTE_FILES = [
    RemoteFile("iris", "all", "iris.data", "iris/iris.data", 150, 5),
    RemoteFile("wine", "all", "wine.data", "wine/wine.data", 178, 14),
    RemoteFile("zoo", "all", "zoo.data", "zoo/zoo.data", 101, 18),
    RemoteFile("abalone", "all", "abalone.data", "abalone/abalone.data", 4177, 9),
    RemoteFile("banknote", "all", "data_banknote_authentication.txt",
               "00267/data_banknote_authentication.txt", 1372, 5),
]

USER_MODELLING_SHAPES = {
    "user_modelling_train.csv": ("train", 258),
    "user_modelling_test.csv": ("test", 145),
}


def download(url: str) -> bytes:
    request = urllib.request.Request(url, headers={"User-Agent": "bandgrid-fetch/0.1"})
    with urllib.request.urlopen(request, timeout=60) as response:
        return response.read()


def validate_table(text: str, rows: int, fields: int, delimiter: str, name: str):
    data_lines = [line for line in text.splitlines() if line.strip()]
    if len(data_lines) != rows:
        raise ValueError(f"{name}: {len(data_lines)} data rows, expected {rows}")
    for i, line in enumerate(data_lines):
        found = len(line.split(delimiter))
        if found != fields:
            raise ValueError(f"{name}:{i + 1}: {found} fields, expected {fields}")


def descriptor_checksum(descriptor_dir: Path, dataset: str, file_key: str):
    descriptor = descriptor_dir / f"{dataset}.json"
    if not descriptor.exists():
        return None
    return json.loads(descriptor.read_text()).get("checksums", {}).get(file_key)


def verify_checksum(payload: bytes, expected: str, name: str):
    digest = hashlib.sha256(payload).hexdigest()
    if digest != expected:
        raise ValueError(f"{name}: sha256 {digest} does not match descriptor value {expected}")


def fetch_file(remote: RemoteFile, base: str, data_root: Path, descriptor_dir: Path,
               force: bool) -> bool:
    target = data_root / remote.filename
    if target.exists() and not force:
        print(f"exists  {target} (use --force to refetch)")
        return True
    url = f"{base}/{remote.path}"
    try:
        payload = download(url)
        text = payload.decode("utf-8")
        validate_table(text, remote.rows, remote.fields, remote.delimiter, remote.filename)
        expected = descriptor_checksum(descriptor_dir, remote.dataset, remote.file_key)
        if expected:
            verify_checksum(payload, expected, remote.filename)
    except (urllib.error.URLError, UnicodeDecodeError, ValueError) as err:
        print(f"failed  {remote.filename}: {err}", file=sys.stderr)
        return False
    data_root.mkdir(parents=True, exist_ok=True)
    target.write_bytes(payload)
    print(f"fetched {target} ({remote.rows} rows)")
    return True


def convert_user_modelling(xls_path: Path, data_root: Path) -> bool:
    try:
        import pandas as pd
    except ImportError:
        print(
            f"saved   {xls_path}\n"
            "        pandas (with xlrd) is not available to convert it; export the\n"
            "        Training_Data and Test_Data sheets by hand: the five numeric\n"
            "        columns followed by the class column, comma separated, no\n"
            "        header row, class strings very_low/Low/Middle/High, into\n"
            f"        {data_root}/user_modelling_train.csv and "
            f"{data_root}/user_modelling_test.csv",
            file=sys.stderr,
        )
        return False

    try:
        sheets = pd.read_excel(xls_path, sheet_name=None)
    except ImportError as err:  # pandas raises this when xlrd is missing
        print(f"failed  reading {xls_path}: {err}", file=sys.stderr)
        return False

    ok = True
    for filename, (kind, rows) in USER_MODELLING_SHAPES.items():
        sheet = next((frame for name, frame in sheets.items()
                      if kind in name.lower()), None)
        if sheet is None:
            print(f"failed  {filename}: no sheet name contains '{kind}'", file=sys.stderr)
            ok = False
            continue
        table = sheet.iloc[:, :6].dropna(how="all")
        labels = table.iloc[:, 5].astype(str).str.strip().str.lower().str.replace(" ", "_")
        unknown = sorted(set(labels) - set(USER_MODELLING_LABELS))
        if unknown:
            print(f"failed  {filename}: unrecognized class strings {unknown}", file=sys.stderr)
            ok = False
            continue
        table.iloc[:, 5] = labels.map(USER_MODELLING_LABELS)
        if len(table) != rows:
            print(f"failed  {filename}: {len(table)} rows, expected {rows}", file=sys.stderr)
            ok = False
            continue
        target = data_root / filename
        table.to_csv(target, header=False, index=False)
        print(f"wrote   {target} ({rows} rows)")
    return ok


def fetch_user_modelling(base: str, data_root: Path, force: bool) -> bool:
    targets = [data_root / name for name in USER_MODELLING_SHAPES]
    if all(t.exists() for t in targets) and not force:
        for t in targets:
            print(f"exists  {t} (use --force to refetch)")
        return True
    xls_path = data_root / "user_modelling.xls"
    if not xls_path.exists() or force:
        try:
            payload = download(f"{base}/{USER_MODELLING_XLS}")
        except urllib.error.URLError as err:
            print(f"failed  user_modelling.xls: {err}", file=sys.stderr)
            return False
        data_root.mkdir(parents=True, exist_ok=True)
        xls_path.write_bytes(payload)
    return convert_user_modelling(xls_path, data_root)


def main() -> int:
    names = sorted({r.dataset for r in REMOTE_FILES} | {"user_modelling"})
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("datasets", nargs="*", metavar="dataset",
                        help=f"subset to fetch (default: all of {', '.join(names)})")
    parser.add_argument("--data-root",
                        default=os.environ.get("BANDGRID_DATA_ROOT", "data"),
                        help="directory the files are written to (default: %(default)s)")
    parser.add_argument("--descriptor-dir",
                        default=os.environ.get("BANDGRID_DESCRIPTOR_DIR", "descriptors"),
                        help="descriptor directory for checksum lookups (default: %(default)s)")
    parser.add_argument("--force", action="store_true", help="refetch existing files")
    args = parser.parse_args()

    wanted = args.datasets or names
    unknown = sorted(set(wanted) - set(names))
    if unknown:
        parser.error(f"unknown dataset(s): {', '.join(unknown)}; known: {', '.join(names)}")

    base = os.environ.get("BANDGRID_FETCH_BASE", CANONICAL_BASE).rstrip("/")
    data_root = Path(args.data_root)
    descriptor_dir = Path(args.descriptor_dir)

    ok = True
    for remote in REMOTE_FILES:
        if remote.dataset in wanted:
            ok &= fetch_file(remote, base, data_root, descriptor_dir, args.force)
    if "user_modelling" in wanted:
        ok &= fetch_user_modelling(base, data_root, args.force)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
