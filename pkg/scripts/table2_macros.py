"""Feed published per-tag F1 columns through ``macro_average``.

    python3 scripts/table2_macros.py
"""
from ldmf.metrics import macro_average

COLUMNS = {
    "Jasmine small": ([63.99, 96.95, 91.24, 92.34, 94.77, 94.27, 79.68, 70.34, 91.01], 86.07),
    "Jasmine big": ([59.24, 91.60, 50.17, 90.22, 95.67, 89.09, 61.57, 71.00, 86.75, 76.88], 77.22),
    "YOLO small": ([61.58, 81.16, 81.90, 88.91, 73.34, 70.41, 83.97, 68.62, 74.91], 76.09),
    "YOLO big": ([23.51, 34.82, 56.55, 57.68, 80.79, 68.00, 10.15, 59.88, 52.98, 69.50], 51.39),
}

if __name__ == "__main__":
    for name, (values, published) in COLUMNS.items():
        got = macro_average(values)
        print(f"{name:14s} {got:6.2f}  published {published:6.2f}  "
              f"{'ok' if abs(got - published) <= 0.005 else 'MISMATCH'}")
