"""Compare the compiled and numpy statevector kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times raw gate application on a 17-qubit register and a full EFRQI block
simulation (16x16 block, 8 value qubits) with each available backend.
"""
import argparse
import time

import numpy as np

from qbc.blocks import QuantumBlock
from qbc.sim import build_efrqi_circuit
from qbc.sim.kernels import available_backends, load_backend


def run_circuit(impl, circuit):
    state = np.zeros(1 << circuit.num_qubits, dtype=np.complex128)
    state[0] = 1.0
    for g in circuit.gates:
        if g.kind.name == "Hadamard":
            impl.apply_h(state, g.target)
        else:
            impl.apply_mcx(state, g.target, *g.control_mask())
    return state


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    block = QuantumBlock(0, 0, rng.integers(-255, 256, (16, 16)))
    circuit = build_efrqi_circuit(block)
    n = circuit.num_qubits
    print(f"EFRQI circuit: {len(circuit)} gates on {n} qubits")

    results = {}
    outputs = {}
    for name in available_backends():
        impl = load_backend(name)
        state = np.zeros(1 << n, dtype=np.complex128)
        state[0] = 1
        h = best_of(lambda: [impl.apply_h(state, t) for t in range(n)], args.repeat) / n
        cx = best_of(lambda: [impl.apply_mcx(state, 0, 1 << 16, 1 << 16) for _ in range(20)],
                     args.repeat) / 20
        mcx = best_of(lambda: [impl.apply_mcx(state, 16, 0xFF00, 0x5A00) for _ in range(20)],
                      args.repeat) / 20
        full = best_of(lambda: outputs.__setitem__(name, run_circuit(impl, circuit)), args.repeat)
        results[name] = (h, cx, mcx, full)

    print(f"{'backend':<8}{'H (us)':>10}{'CX (us)':>10}{'MCX8 (us)':>11}{'block (ms)':>12}")
    for name, (h, cx, mcx, full) in results.items():
        print(f"{name:<8}{h * 1e6:>10.1f}{cx * 1e6:>10.1f}{mcx * 1e6:>11.1f}{full * 1e3:>12.1f}")
    if len(results) == 2:
        speed = results["python"][3] / results["cython"][3]
        same = np.array_equal(outputs["python"], outputs["cython"])
        print(f"cython speedup on full block: {speed:.1f}x; outputs identical: {same}")


if __name__ == "__main__":
    main()
