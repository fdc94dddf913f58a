# utils/validator.py
import json
import math
from numbers import Number

from jsonschema import validate, ValidationError

from configs.env_config import MAX_SOLVE_SECONDS


class Validator:
    def assert_close(self, actual, expected, rel=None, abs_tol=None, label="value"):
        rel = 0.0 if rel is None else rel
        abs_tol = 0.0 if abs_tol is None else abs_tol
        assert math.isclose(actual, expected, rel_tol=rel, abs_tol=abs_tol), (
            f"{label}: expected {expected!r}, got {actual!r} (rel={rel:g}, abs={abs_tol:g})"
        )

    def assert_runtime(self, elapsed, max_seconds=None, strict=False):
        """Warn when a run exceeds its budget; fail instead when strict."""
        max_seconds = max_seconds or MAX_SOLVE_SECONDS
        if elapsed > max_seconds:
            message = f"Runtime {elapsed:.2f}s exceeded budget {max_seconds:.2f}s"
            assert not strict, message
            print(f"⚠ Warning: {message}")

    def assert_inequality(self, report):
        assert report.holds, (
            f"{report.name} fails on {report.label}: lhs={report.lhs!r} rhs={report.rhs!r} margin={report.margin!r}"
        )

    def assert_json_schema(self, data, schema_path):
        with open(schema_path, "r", encoding="utf-8") as f:
            schema = json.load(f)
        try:
            validate(instance=data, schema=schema)
        except ValidationError as e:
            raise AssertionError(f"Schema validation failed: {e.message}")

    def compare_with_expected(self, actual_data, expected_path, rel_tol=1e-6, ignore_keys=()):
        """
        Deep subset comparison:
        - Every key/value in `expected` must be present in `actual`
        - numbers match within `rel_tol` (relative, absolute near zero)
        - `actual` can have extra fields
        """
        with open(expected_path, "r", encoding="utf-8") as f:
            expected_data = json.load(f)

        ignore = {"elapsed", "iterations", "stage_iterations"} | set(ignore_keys)

        def _numbers_match(actual, expected):
            if isinstance(actual, bool) or isinstance(expected, bool):
                return actual == expected
            return math.isclose(actual, expected, rel_tol=rel_tol, abs_tol=rel_tol)

        def _subset_diff(actual, expected, path=""):
            mismatches = {}
            missing = []

            key_name = path.split(".")[-1] if path else ""
            if key_name in ignore:
                return mismatches, missing

            if isinstance(expected, dict):
                if not isinstance(actual, dict):
                    mismatches[path or "<root>"] = {"expected": expected, "actual": actual}
                    return mismatches, missing
                for k, v in expected.items():
                    if k in ignore:
                        continue
                    p = f"{path}.{k}" if path else k
                    if k not in actual:
                        missing.append(p)
                        continue
                    sub_mis, sub_miss = _subset_diff(actual[k], v, p)
                    mismatches.update(sub_mis)
                    missing.extend(sub_miss)

            elif isinstance(expected, list):
                if not isinstance(actual, list):
                    mismatches[path or "<root>"] = {"expected": expected, "actual": actual}
                    return mismatches, missing
                for i, ev in enumerate(expected):
                    if i >= len(actual):
                        missing.append(f"{path}[{i}]")
                        continue
                    sub_mis, sub_miss = _subset_diff(actual[i], ev, f"{path}[{i}]")
                    mismatches.update(sub_mis)
                    missing.extend(sub_miss)

            elif isinstance(expected, Number) and isinstance(actual, Number):
                if not _numbers_match(actual, expected):
                    mismatches[path or "<root>"] = {"expected": expected, "actual": actual}

            elif actual != expected:
                mismatches[path or "<root>"] = {"expected": expected, "actual": actual}

            return mismatches, missing

        mismatches, missing = _subset_diff(actual_data, expected_data)

        if missing:
            raise AssertionError(f"\n❌ Report is missing keys: {', '.join(missing)}")

        if mismatches:
            raise AssertionError(
                f"\n❌ Report does not match expected values.\n"
                f"Mismatches:\n{json.dumps(mismatches, indent=2)}"
            )

        print("✅ Report matches expected values (deep subset).")
