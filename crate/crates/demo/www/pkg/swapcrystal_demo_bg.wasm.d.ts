/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const imbalance_pmf: (a: number, b: number) => [number, number, number, number];
export const spectrum: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number, number];
export const z_trace: (a: number, b: number, c: number, d: number, e: bigint, f: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
