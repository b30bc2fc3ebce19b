package fixtures;

import org.junit.Test;

public class ServiceTest {
    @Test
    public void throwsServiceException() {
        new Service().start();
    }
}
