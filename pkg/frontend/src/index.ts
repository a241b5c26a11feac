export * from './types';
export * from './api';
export * from './viewState';
export * from './scene';
export * from './lasso';
export * from './xray';
export * from './tour';
