class PipelineError(Exception):
    """Fatal input/config error. The CLI maps this to exit status 1."""
