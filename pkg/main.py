"""
Main entry point for the anytime conflict-based search benchmark tool.
"""

import logging
import sys

from cli.commands import dispatch
from cli.parser import build_parser
from utils.logger import setup_logger


def main(argv=None) -> int:
    """Parse arguments, set up logging and run the chosen command."""
    args = build_parser().parse_args(argv)
    setup_logger(getattr(logging, args.log_level), args.log_file,
                 file_logging=not args.no_log_file)
    logger = logging.getLogger(__name__)
    logger.info(f"Starting anytime-cbs {args.command}")

    try:
        code = dispatch(args)
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        code = 130
    except Exception as e:
        logger.error(f"Unhandled error in {args.command}: {e}", exc_info=True)
        raise
    logger.info(f"{args.command} finished with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
