import csv
import json
from os import path as ospath
from re import fullmatch

import numpy as np

from spaaa import LOGGER
from spaaa.helper.ext_utils.exceptions import (
    SchemaError,
    VersionError,
    InvalidArgumentError,
)
from spaaa.helper.approx_utils.lsq import SampleSet
from spaaa.helper.approx_utils.barycentric import NodeAxes, BarycentricModel

MODEL_VERSION = "1"
COORD_REGEX = r"z(\d+)_(re|im)"


def get_base_name(orig_path):
    return ospath.splitext(orig_path)[0]


def heldout_path(out_path):
    return f"{get_base_name(out_path)}_heldout.csv"


def report_path(model_path):
    return f"{get_base_name(model_path)}_report.json"


def _parse_header(header, path, need_values=True):
    """Column positions of every coordinate and of the value, by name."""
    columns = {name.strip(): i for i, name in enumerate(header)}
    if len(columns) != len(header):
        raise SchemaError(f"{path}: duplicate column names in header {header}")
    coords = {}
    for name in columns:
        if match := fullmatch(COORD_REGEX, name):
            coords.setdefault(int(match[1]), {})[match[2]] = columns[name]
    d = len(coords)
    if d == 0:
        raise SchemaError(f"{path}: header has no z1_re column: {header}")
    if sorted(coords) != list(range(1, d + 1)):
        raise SchemaError(f"{path}: coordinate columns must be z1..z{d}, got {sorted(coords)}")
    for j in range(1, d + 1):
        if "re" not in coords[j]:
            raise SchemaError(f"{path}: missing column z{j}_re")
    layout = [(coords[j]["re"], coords[j].get("im")) for j in range(1, d + 1)]
    value = None
    if "f_re" in columns:
        value = (columns["f_re"], columns.get("f_im"))
    elif "f_im" in columns:
        raise SchemaError(f"{path}: column f_im without f_re")
    elif need_values:
        raise SchemaError(f"{path}: missing column f_re")
    return layout, value


def _cell(row, index, row_no, name, path):
    if index is None:
        return 0.0
    text = row[index].strip()
    try:
        value = float(text)
    except ValueError:
        raise SchemaError(f"{path}: row {row_no}, column {name}: not a number: {text!r}") from None
    if not np.isfinite(value):
        raise SchemaError(f"{path}: row {row_no}, column {name}: non-finite value {text!r}")
    return value


def _read_csv(path, need_values):
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None:
            raise SchemaError(f"{path}: empty file, header row is mandatory")
        layout, value = _parse_header(header, path, need_values)
        points, values, rows = [], [], []
        for row_no, row in enumerate(reader, start=2):
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise SchemaError(
                    f"{path}: row {row_no} has {len(row)} fields, header has {len(header)}"
                )
            points.append(
                [
                    complex(
                        _cell(row, re, row_no, f"z{j}_re", path),
                        _cell(row, im, row_no, f"z{j}_im", path),
                    )
                    for j, (re, im) in enumerate(layout, start=1)
                ]
            )
            if value is not None:
                values.append(
                    complex(
                        _cell(row, value[0], row_no, "f_re", path),
                        _cell(row, value[1], row_no, "f_im", path),
                    )
                )
            rows.append(row_no)
    if not points:
        raise SchemaError(f"{path}: no data rows")
    return np.array(points, dtype=np.complex128), values, rows, len(layout)


def _check_duplicates(points, rows, path):
    seen = {}
    duplicates = []
    for point, row_no in zip(map(tuple, points.tolist()), rows):
        if point in seen:
            duplicates.append(f"{seen[point]}/{row_no}")
        else:
            seen[point] = row_no
    if duplicates:
        raise SchemaError(f"{path}: duplicate sample points at rows {', '.join(duplicates)}")


def load_samples(path, fmt="csv"):
    if fmt != "csv":
        raise InvalidArgumentError(f"Unsupported sample format: {fmt}")
    points, values, rows, d = _read_csv(path, need_values=True)
    _check_duplicates(points, rows, path)
    samples = SampleSet(points, values)
    LOGGER.info(f"Loaded {samples.K} samples (d={d}) from {path}")
    return samples


def load_points(path):
    """Query points of a CSV; value columns, if any, are ignored."""
    points, _, _, _ = _read_csv(path, need_values=False)
    return points


def _coord_header(d):
    return [f"z{j}_{part}" for j in range(1, d + 1) for part in ("re", "im")]


def _coord_cells(point):
    return [x for z in point for x in (z.real, z.imag)]


def save_samples(samples, path):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow([*_coord_header(samples.d), "f_re", "f_im"])
        for point, value in zip(samples.points.tolist(), samples.values.tolist()):
            writer.writerow([*_coord_cells(point), value.real, value.imag])
    LOGGER.info(f"Saved {samples.K} samples to {path}")


def save_evaluations(path, points, values, statuses):
    points = np.asarray(points, dtype=np.complex128)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow([*_coord_header(points.shape[1]), "r_re", "r_im", "status"])
        for point, value, status in zip(points.tolist(), values.tolist(), statuses):
            writer.writerow([*_coord_cells(point), value.real, value.imag, status])
    LOGGER.info(f"Saved {points.shape[0]} evaluations to {path}")


def _pairs(values):
    return [[z.real, z.imag] for z in np.asarray(values).reshape(-1).tolist()]


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    if not np.isfinite(value):
        raise SchemaError(f"{where}: non-finite number {value!r}")
    return float(value)


def _complex_list(items, where):
    if not isinstance(items, list):
        raise SchemaError(f"{where}: expected a list of [re, im] pairs")
    result = []
    for i, pair in enumerate(items):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"{where}[{i}]: expected an [re, im] pair, got {pair!r}")
        result.append(complex(_number(pair[0], f"{where}[{i}]"), _number(pair[1], f"{where}[{i}]")))
    return result


def model_to_dict(model, meta=None):
    document = {
        "version": MODEL_VERSION,
        "d": model.d,
        "nodes": [_pairs(axis) for axis in model.nodes],
        "alpha": _pairs(model.vec_alpha()),
        "beta": _pairs(model.vec_beta()),
    }
    if meta is not None:
        document["meta"] = meta
    return document


def model_from_dict(document):
    if not isinstance(document, dict):
        raise SchemaError("Model file must hold a JSON object")
    if "version" not in document:
        raise SchemaError("Model file has no 'version' field")
    if document["version"] != MODEL_VERSION:
        raise VersionError(
            f"Unsupported model file version {document['version']!r}, "
            f"expected {MODEL_VERSION!r}"
        )
    for key in ("d", "nodes", "alpha", "beta"):
        if key not in document:
            raise SchemaError(f"Model file has no {key!r} field")
    d = document["d"]
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise SchemaError(f"'d' must be a positive integer, got {d!r}")
    nodes = document["nodes"]
    if not isinstance(nodes, list) or len(nodes) != d:
        raise SchemaError(f"'nodes' must hold {d} axes")
    axes = []
    for j, axis in enumerate(nodes):
        axis = _complex_list(axis, f"nodes[{j}]")
        if not axis:
            raise SchemaError(f"nodes[{j}]: axis is empty")
        axes.append(axis)
    size = int(np.prod([len(axis) for axis in axes]))
    tensors = {}
    for key in ("alpha", "beta"):
        tensors[key] = _complex_list(document[key], key)
        if len(tensors[key]) != size:
            raise SchemaError(
                f"'{key}' has {len(tensors[key])} entries, node grid needs {size}"
            )
    try:
        return BarycentricModel(NodeAxes(tuple(axes)), tensors["alpha"], tensors["beta"])
    except InvalidArgumentError as e:
        raise SchemaError(f"Invalid model: {e}") from e


def save_model(model, path, meta=None):
    with open(path, "w") as f:
        json.dump(model_to_dict(model, meta), f, indent=1)
    LOGGER.info(f"Saved model with node counts {model.dims} to {path}")


def load_model(path, with_meta=False):
    try:
        with open(path) as f:
            document = json.load(f)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON: {e}") from e
    model = model_from_dict(document)
    LOGGER.info(f"Loaded model with node counts {model.dims} from {path}")
    if with_meta:
        return model, document.get("meta")
    return model


def save_report(report, path):
    with open(path, "w") as f:
        json.dump(report.to_dict(), f, indent=1)
    LOGGER.info(f"Saved fit report to {path}")
