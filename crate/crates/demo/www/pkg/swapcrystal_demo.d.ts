/* tslint:disable */
/* eslint-disable */

/**
 * Exact local-imbalance pmf on `0, 2/L, ..., 1`.
 */
export function imbalance_pmf(length: number, d: number): Float64Array;

export function spectrum(length: number, spin_one: boolean, j: number, epsilon: number, seed: bigint): Float64Array;

/**
 * Order parameter Z(t), t = 0..=periods, from the Neel (spin-1/2) or Up-Zero (spin-1) state.
 */
export function z_trace(length: number, spin_one: boolean, j: number, epsilon: number, seed: bigint, periods: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly imbalance_pmf: (a: number, b: number) => [number, number, number, number];
    readonly spectrum: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number, number];
    readonly z_trace: (a: number, b: number, c: number, d: number, e: bigint, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
