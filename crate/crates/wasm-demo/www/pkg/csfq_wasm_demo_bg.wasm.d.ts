/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_device_free: (a: number, b: number) => void;
export const device_fluxSweep: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const device_new: () => number;
export const device_spectroscopy: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const device_withQubit: (a: number, b: number, c: number, d: number) => [number, number, number];
export const t1Curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
