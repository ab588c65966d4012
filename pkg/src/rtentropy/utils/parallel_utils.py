import logging
import os
from typing import Callable, Optional

from tqdm import tqdm

logger = logging.getLogger(__name__)

LOOP_MODES = ("seq", "ray")


def _guarded(func: Callable, allow_exception: bool, exception_default):
    if not allow_exception:
        return func

    def _func(*args, **kw):
        try:
            return func(*args, **kw)
        except Exception as e:
            logger.warning("%s failed on %r: %s", getattr(func, "__name__", func), args[:1], e)
            return exception_default

    return _func


def with_seq(
    func: Callable, input_list: list, kwargs=None, allow_exception=False, exception_default=None, num_cpus=None
) -> list:
    """
    For-loop through a function call sequentially
    """
    _func = _guarded(func, allow_exception, exception_default)
    return [_func(input_val, **(kwargs or {})) for input_val in input_list]


def with_ray(
    func: Callable,
    input_list: list,
    kwargs=None,
    allow_exception=False,
    exception_default=None,
    num_cpus: Optional[int] = None,
    progress_bar: bool = True,
) -> list:
    """
    For-loop through a function call with ray; results keep the order of `input_list`.
    """
    try:
        import ray
    except ImportError:
        raise ImportError("mode 'ray' requires the 'parallel' extra: pip install rtentropy[parallel]") from None

    _func = _guarded(func, allow_exception, exception_default)
    if not ray.is_initialized():
        num_cpus_system = os.cpu_count()
        if num_cpus is not None and num_cpus_system > num_cpus:
            ray.init(num_cpus=num_cpus)
        else:
            ray.init()
    remote_func = ray.remote(_func)
    results = [remote_func.remote(i, **(kwargs or {})) for i in input_list]
    if progress_bar:
        return [ray.get(res) for res in tqdm(results)]
    return ray.get(results)


def loop_func(func: Callable, input_list: list, mode: str = "seq", **loop_kwargs) -> list:
    if mode not in LOOP_MODES:
        raise ValueError(f'Unsupported mode "{mode}", expected one of {LOOP_MODES}')
    if len(input_list) == 0:
        return []
    process_func = with_ray if mode == "ray" else with_seq
    return process_func(func=func, input_list=input_list, **loop_kwargs)
