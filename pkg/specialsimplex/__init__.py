from loguru import logger

# silent as a library; the command line enables it
logger.disable("specialsimplex")
